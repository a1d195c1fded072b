//! Auxiliary games used inside the composite strategies.

pub mod boxgame;
pub mod mindeg;
pub mod minbox;
pub mod sbg;

pub use boxgame::{box_maker_move, play_box_game, BoxOpponent, BoxState, Cell};
pub use mindeg::{
    mindeg_plus_move, play_mindeg_game, EdgeMark, MinDegOpponent, MinDegState, MinDegStatus,
};
pub use minbox::{
    minbox_invariant_check, minbox_maker_move, play_minbox_game, MinBox, MinBoxOpponent,
    MinBoxReport, MinBoxState,
};
pub use sbg::{
    sbg_best_move, sbg_conditions, sbg_goal_holds, sbg_maker_move, sbg_round, sbg_worst, Hyperedge, SbgCell,
    SbgState,
};
