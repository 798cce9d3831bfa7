//! Arithmetic billiards on `m_1 × … × m_p` integer grids.
//!
//! A light ray enters a box-shaped lattice with mirrored walls and moves along
//! the main diagonals of unit cells, reflecting off the boundary. This crate
//! simulates such rays exactly, enumerates and counts the closed and open
//! paths, decides reachability between lattice points, partitions the lattice
//! into diagonal-walk orbits, computes generating functions of the coordinate
//! traces (triangle waves), and renders planar trajectories as SVG.
//!
//! Every coordinate is stored as a residue on a *phase circle* of length
//! `2·m_i`; the lattice position is recovered with the tent map
//! `x = m − |m − u|`. This makes the reflection dynamics a plain translation
//! `u ↦ u + 1` and turns most questions into modular arithmetic.

pub mod arith;
pub mod billiards;
pub mod circseq;
pub mod error;
pub mod grid;
pub mod render;
pub mod walks;

pub use billiards::{
    boundary_hits, classify_path, closed_boundary_count_2d, closing_step, coordinate_sums,
    count_closed, count_open, enumerate_paths, enumerate_paths_with_cap, geometric_length,
    light_reachable, light_reachable_oracle, simulate, simulate_from_state, step_length, Path,
    PathKind, ReachAnswer, Trajectory, DEFAULT_STATE_CAP,
};
pub use circseq::{
    circ_seq, circ_seq_closed, gen_function, numerator_poly, run_derivative_poly, series_expand,
    IntPolynomial, RationalGF, SeqSpec, Sign,
};
pub use error::{Error, Result};
pub use grid::{index_of, tent, DirectionMask, GridSpec, OrbitIndex, PhaseState, Point};
pub use render::{render_grid, RenderOptions};
pub use walks::{
    connectivity_partition, find_walk, orbit_partition, orbit_size, orbit_sizes_bruteforce,
    replay_walk, same_orbit, OrbitSummary,
};
