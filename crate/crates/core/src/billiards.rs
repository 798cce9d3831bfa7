//! Ray simulation, path enumeration and counting, and reachability.
//!
//! A *closed path* is a pair of step-orbits `{O, reverse(O)}` on phase states
//! that are distinct; an *open path* is a single orbit equal to its own time
//! reversal. Open paths run corner to corner and traverse every segment twice.

use serde::{Deserialize, Serialize};

use crate::arith::{self, Congruence};
use crate::error::{Error, Result};
use crate::grid::{tent, DirectionMask, GridSpec, PhaseState, Point};

/// Default cap on the number of phase states an enumeration may touch.
pub const DEFAULT_STATE_CAP: u64 = 10_000_000;

/// Cap on iteration-based operations (trajectories, oracles, period sums).
pub const ITERATION_CAP: u64 = 1_000_000_000;

const TRAJECTORY_CAP: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PathKind {
    Closed,
    Open,
}

/// One geometric (undirected) billiard path.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Path {
    /// Lexicographically least phase state over the path's orbit(s).
    pub representative: PhaseState,
    pub kind: PathKind,
    pub step_length: u64,
    pub distinct_segments: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trajectory {
    pub points: Vec<Point>,
    pub states: Vec<PhaseState>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReachAnswer {
    pub reachable: bool,
    pub witness_steps: Option<u64>,
    /// Branch of each target coordinate: `0` for `+y_i`, `1` for `−y_i`.
    pub sign_choice: Option<Vec<u8>>,
}

impl ReachAnswer {
    fn unreachable() -> Self {
        Self {
            reachable: false,
            witness_steps: None,
            sign_choice: None,
        }
    }

    fn found(steps: u64, signs: Vec<u8>) -> Self {
        Self {
            reachable: true,
            witness_steps: Some(steps),
            sign_choice: Some(signs),
        }
    }
}

impl Trajectory {
    pub fn steps(&self) -> usize {
        self.points.len().saturating_sub(1)
    }

    /// First step index `k >= 1` at which the ray is back at its start point
    /// having arrived from the start's predecessor point.
    pub fn closed_at(&self, grid: &GridSpec) -> Option<usize> {
        let start = self.states.first()?;
        let before = grid.project_unchecked(&grid.step_back(start));
        (1..self.points.len())
            .find(|&k| self.points[k] == self.points[0] && self.points[k - 1] == before)
    }
}

impl Path {
    /// Polyline of the path: a full period for closed paths, corner to corner
    /// for open ones.
    pub fn trace(&self, grid: &GridSpec) -> Result<Trajectory> {
        match self.kind {
            PathKind::Closed => simulate_from_state(grid, &self.representative, self.step_length),
            PathKind::Open => {
                let offset = vertex_offset(grid, &self.representative)?
                    .expect("open path orbit visits a vertex");
                let corner = grid.advance(&self.representative, offset);
                simulate_from_state(grid, &corner, self.step_length / 2)
            }
        }
    }
}

/// Closed-path step length `2·lcm(m_1, …, m_p)`.
pub fn step_length(grid: &GridSpec) -> Result<u64> {
    grid.lcm()?
        .checked_mul(2)
        .ok_or(Error::Overflow("step length"))
}

/// Euclidean length of a closed path: each step is a unit-cell main diagonal
/// of length `√p`.
pub fn geometric_length(grid: &GridSpec) -> Result<f64> {
    Ok(step_length(grid)? as f64 * (grid.arity() as f64).sqrt())
}

pub fn simulate(
    grid: &GridSpec,
    start: &Point,
    mask: &DirectionMask,
    n_steps: u64,
) -> Result<Trajectory> {
    let state = grid.lift(start, mask)?;
    simulate_from_state(grid, &state, n_steps)
}

pub fn simulate_from_state(
    grid: &GridSpec,
    start: &PhaseState,
    n_steps: u64,
) -> Result<Trajectory> {
    grid.check_state(start)?;
    if n_steps >= TRAJECTORY_CAP {
        return Err(Error::BudgetExceeded {
            what: "trajectory",
            needed: n_steps as u128 + 1,
            cap: TRAJECTORY_CAP,
        });
    }
    let mut states = Vec::with_capacity(n_steps as usize + 1);
    states.push(start.clone());
    for _ in 0..n_steps {
        let next = grid.step(states.last().unwrap());
        states.push(next);
    }
    let points = states.iter().map(|s| grid.project_unchecked(s)).collect();
    Ok(Trajectory { points, states })
}

/// Least `k >= 0` such that `step^k(state)` sits on a grid vertex, if any.
fn vertex_offset(grid: &GridSpec, state: &PhaseState) -> Result<Option<u64>> {
    let system: Vec<Congruence> = state
        .residues()
        .iter()
        .zip(grid.dims())
        .map(|(&u, &m)| Congruence::new(-(u as i128), m))
        .collect();
    Ok(arith::solve_congruences(&system)?.map(|c| c.residue))
}

/// Open iff the orbit of `state` is its own time reversal, which happens
/// exactly when the orbit reaches a vertex (solvable `k ≡ −u_i mod m_i`).
pub fn classify_path(grid: &GridSpec, state: &PhaseState) -> Result<PathKind> {
    grid.check_state(state)?;
    Ok(match vertex_offset(grid, state)? {
        Some(_) => PathKind::Open,
        None => PathKind::Closed,
    })
}

/// Number of closed paths, `2^(p−2)·(∏ m_i / lcm − 1)`.
pub fn count_closed(grid: &GridSpec) -> Result<u64> {
    let overflow = || Error::Overflow("closed path count");
    let lcm = grid.lcm()? as u128;
    let product = grid
        .dims()
        .iter()
        .try_fold(1u128, |acc, &m| acc.checked_mul(m as u128))
        .ok_or_else(overflow)?;
    let ratio = product / lcm - 1;
    let scale = 1u128
        .checked_shl(grid.arity() as u32 - 2)
        .ok_or_else(overflow)?;
    let total = ratio.checked_mul(scale).ok_or_else(overflow)?;
    u64::try_from(total).map_err(|_| overflow())
}

/// Number of open paths, `2^(p−1)`: one per pair of opposite corners.
pub fn count_open(grid: &GridSpec) -> Result<u64> {
    1u64.checked_shl(grid.arity() as u32 - 1)
        .filter(|_| grid.arity() <= 64)
        .ok_or(Error::Overflow("open path count"))
}

pub fn enumerate_paths(grid: &GridSpec) -> Result<Vec<Path>> {
    enumerate_paths_with_cap(grid, DEFAULT_STATE_CAP)
}

/// Partitions every phase state into step-orbits and pairs each orbit with
/// its reversal. Paths come out ordered by representative.
pub fn enumerate_paths_with_cap(grid: &GridSpec, cap: u64) -> Result<Vec<Path>> {
    let total = state_budget(grid, cap, "path enumeration")?;
    let k = step_length(grid)?;
    let dims = grid.dims();
    let strides = strides(dims.iter().map(|&m| 2 * m));

    let index =
        |u: &[u64]| -> usize { u.iter().zip(&strides).map(|(&r, &s)| r as usize * s).sum() };
    let mut visited = vec![false; total];
    let mark_orbit = |start: &[u64], visited: &mut [bool]| {
        let mut u = start.to_vec();
        for _ in 0..k {
            visited[index(&u)] = true;
            for (r, &m) in u.iter_mut().zip(dims) {
                *r += 1;
                if *r == 2 * m {
                    *r = 0;
                }
            }
        }
    };

    let mut paths = Vec::new();
    let mut residues = vec![0u64; dims.len()];
    for idx in 0..total {
        if !visited[idx] {
            decode(idx, &strides, dims.iter().map(|&m| 2 * m), &mut residues);
            mark_orbit(&residues, &mut visited);
            let rev: Vec<u64> = residues
                .iter()
                .zip(dims)
                .map(|(&u, &m)| (2 * m - u) % (2 * m))
                .collect();
            let kind = if visited[index(&rev)] {
                PathKind::Open
            } else {
                mark_orbit(&rev, &mut visited);
                PathKind::Closed
            };
            paths.push(Path {
                representative: PhaseState::from_vec(residues.clone()),
                kind,
                step_length: k,
                distinct_segments: match kind {
                    PathKind::Closed => k,
                    PathKind::Open => k / 2,
                },
            });
        }
    }
    Ok(paths)
}

/// Number of states on the path's orbit (one period) touching the boundary.
pub fn boundary_hits(grid: &GridSpec, path: &Path) -> Result<u64> {
    grid.check_state(&path.representative)?;
    let k = iteration_budget(step_length(grid)?, "boundary scan")?;
    let mut state = path.representative.clone();
    let mut hits = 0;
    for _ in 0..k {
        if grid.is_boundary_state(&state) {
            hits += 1;
        }
        state = grid.step(&state);
    }
    Ok(hits)
}

/// Boundary points on any closed path of a planar grid,
/// `2(m_1 + m_2) / gcd(m_1, m_2)`.
pub fn closed_boundary_count_2d(grid: &GridSpec) -> Result<u64> {
    match *grid.dims() {
        [a, b] => (a.checked_add(b))
            .and_then(|s| s.checked_mul(2))
            .map(|s| s / arith::gcd(a, b))
            .ok_or(Error::Overflow("boundary count")),
        _ => Err(Error::NotPlanar(grid.arity())),
    }
}

/// Per-axis sum of lattice coordinates over one period `k = 0, …, 𝒦−1`.
pub fn coordinate_sums(grid: &GridSpec, start: &PhaseState) -> Result<Vec<u64>> {
    grid.check_state(start)?;
    let k = iteration_budget(step_length(grid)?, "coordinate sums")?;
    let mut sums = vec![0u64; grid.arity()];
    let mut state = start.clone();
    for _ in 0..k {
        for ((sum, &u), &m) in sums.iter_mut().zip(state.residues()).zip(grid.dims()) {
            *sum = sum
                .checked_add(tent(m, u))
                .ok_or(Error::Overflow("coordinate sum"))?;
        }
        state = grid.step(&state);
    }
    Ok(sums)
}

/// Decides whether the ray leaving `from` (on the branches in `mask`) ever
/// passes through `to`, by solving `k ≡ v_i − u_i (mod 2 m_i)` for each lift
/// `v` of the target.
pub fn light_reachable(
    grid: &GridSpec,
    from: &Point,
    mask: &DirectionMask,
    to: &Point,
) -> Result<ReachAnswer> {
    let source = grid.lift(from, mask)?;
    grid.check_point(to)?;
    let mut search = SignSearch {
        dims: grid.dims(),
        target: to.coords(),
        source: source.residues(),
        signs: Vec::with_capacity(grid.arity()),
        best: None,
    };
    search.descend(Congruence::new(0, 1))?;
    Ok(match search.best {
        Some((k, signs)) => ReachAnswer::found(k, signs),
        None => ReachAnswer::unreachable(),
    })
}

/// Depth-first walk over the sign choices of the target lift, merging one
/// axis congruence at a time so incompatible prefixes are cut early. Choices
/// are visited in lexicographic order and only a strictly smaller `k`
/// replaces the incumbent, so ties keep the lexicographically least choice.
struct SignSearch<'a> {
    dims: &'a [u64],
    target: &'a [u64],
    source: &'a [u64],
    signs: Vec<u8>,
    best: Option<(u64, Vec<u8>)>,
}

impl SignSearch<'_> {
    fn descend(&mut self, acc: Congruence) -> Result<()> {
        let axis = self.signs.len();
        if axis == self.dims.len() {
            if self.best.as_ref().is_none_or(|(k, _)| acc.residue < *k) {
                self.best = Some((acc.residue, self.signs.clone()));
            }
            return Ok(());
        }
        let (m, y, u) = (self.dims[axis], self.target[axis], self.source[axis]);
        // A boundary coordinate has a single lift; keep only its `+` spelling.
        let choices: &[u8] = if y == 0 || y == m { &[0] } else { &[0, 1] };
        for &sign in choices {
            let v = if sign == 0 {
                y as i128
            } else {
                2 * m as i128 - y as i128
            };
            if let Some(next) = acc.merge(Congruence::new(v - u as i128, 2 * m))? {
                self.signs.push(sign);
                self.descend(next)?;
                self.signs.pop();
            }
        }
        Ok(())
    }
}

fn signs_of(grid: &GridSpec, state: &PhaseState) -> Vec<u8> {
    state
        .residues()
        .iter()
        .zip(grid.dims())
        .map(|(&u, &m)| u8::from(u > m))
        .collect()
}

/// Same contract as [`light_reachable`], decided by stepping the ray through
/// one full period.
pub fn light_reachable_oracle(
    grid: &GridSpec,
    from: &Point,
    mask: &DirectionMask,
    to: &Point,
) -> Result<ReachAnswer> {
    let mut state = grid.lift(from, mask)?;
    grid.check_point(to)?;
    let period = iteration_budget(step_length(grid)?, "reachability oracle")?;
    for k in 0..period {
        if grid.project_unchecked(&state) == *to {
            return Ok(ReachAnswer::found(k, signs_of(grid, &state)));
        }
        state = grid.step(&state);
    }
    Ok(ReachAnswer::unreachable())
}

/// Iteration oracle answers for every lattice point at once, in lexicographic
/// point order. One period of stepping covers all targets.
pub fn light_reachable_oracle_all(
    grid: &GridSpec,
    from: &Point,
    mask: &DirectionMask,
) -> Result<Vec<(Point, ReachAnswer)>> {
    let mut state = grid.lift(from, mask)?;
    let period = iteration_budget(step_length(grid)?, "reachability oracle")?;
    let count = grid.point_count()?;
    if count > DEFAULT_STATE_CAP {
        return Err(Error::BudgetExceeded {
            what: "reachability table",
            needed: count as u128,
            cap: DEFAULT_STATE_CAP,
        });
    }
    let strides = strides(grid.dims().iter().map(|&m| m + 1));
    let mut answers: Vec<Option<ReachAnswer>> = vec![None; count as usize];
    for k in 0..period {
        let point = grid.project_unchecked(&state);
        let idx: usize = point
            .coords()
            .iter()
            .zip(&strides)
            .map(|(&x, &s)| x as usize * s)
            .sum();
        if answers[idx].is_none() {
            answers[idx] = Some(ReachAnswer::found(k, signs_of(grid, &state)));
        }
        state = grid.step(&state);
    }
    Ok(grid
        .points()
        .zip(answers)
        .map(|(p, a)| (p, a.unwrap_or_else(ReachAnswer::unreachable)))
        .collect())
}

/// Least `k >= 1` with `F^k(P) = P` and `F^(k−1)(P) = F^(−1)(P)` on lattice
/// positions, found by stepping. Both conditions are compared on projected
/// points, not on phase states.
pub fn closing_step(grid: &GridSpec, state: &PhaseState) -> Result<u64> {
    grid.check_state(state)?;
    let dims = grid.dims();
    let start: Vec<u64> = grid.project_unchecked(state).0;
    let before: Vec<u64> = grid.project_unchecked(&grid.step_back(state)).0;
    let mut u = state.residues().to_vec();
    let mut prev = start.clone();
    let mut cur = vec![0u64; dims.len()];
    for k in 1..=ITERATION_CAP {
        for ((r, c), &m) in u.iter_mut().zip(cur.iter_mut()).zip(dims) {
            *r += 1;
            if *r == 2 * m {
                *r = 0;
            }
            *c = tent(m, *r);
        }
        if cur == start && prev == before {
            return Ok(k);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    Err(Error::BudgetExceeded {
        what: "closing step search",
        needed: ITERATION_CAP as u128 + 1,
        cap: ITERATION_CAP,
    })
}

fn iteration_budget(steps: u64, what: &'static str) -> Result<u64> {
    if steps > ITERATION_CAP {
        Err(Error::BudgetExceeded {
            what,
            needed: steps as u128,
            cap: ITERATION_CAP,
        })
    } else {
        Ok(steps)
    }
}

fn state_budget(grid: &GridSpec, cap: u64, what: &'static str) -> Result<usize> {
    let needed = grid
        .dims()
        .iter()
        .try_fold(1u128, |acc, &m| acc.checked_mul(2 * m as u128))
        .unwrap_or(u128::MAX);
    if needed > cap as u128 {
        return Err(Error::BudgetExceeded { what, needed, cap });
    }
    Ok(needed as usize)
}

/// Row-major strides, first axis most significant.
pub(crate) fn strides(
    radices: impl DoubleEndedIterator<Item = u64> + ExactSizeIterator,
) -> Vec<usize> {
    let mut out = vec![0usize; radices.len()];
    let mut acc = 1usize;
    for (slot, r) in out.iter_mut().rev().zip(radices.rev()) {
        *slot = acc;
        acc *= r as usize;
    }
    out
}

pub(crate) fn decode(
    mut idx: usize,
    strides: &[usize],
    radices: impl Iterator<Item = u64>,
    out: &mut [u64],
) {
    for ((slot, &s), _) in out.iter_mut().zip(strides).zip(radices) {
        *slot = (idx / s) as u64;
        idx %= s;
    }
}
