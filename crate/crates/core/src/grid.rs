//! Grids, lattice points, and phase states.
//!
//! Coordinate `i` of a moving ray lives on a cycle `Z_{2 m_i}`: residues
//! `0..=m_i` are the ascending branch and `m_i..2 m_i` the descending one.
//! [`tent`] folds the cycle back onto the segment `0..=m_i`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};

/// Folds a phase residue `u ∈ [0, 2m)` onto the lattice segment `[0, m]`.
#[inline]
pub fn tent(m: u64, u: u64) -> u64 {
    debug_assert!(u < 2 * m);
    if u <= m {
        u
    } else {
        2 * m - u
    }
}

/// Dimensions `m_1 × … × m_p` of a grid, `p >= 2`, every `m_i >= 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GridSpec {
    dims: Vec<u64>,
}

/// A lattice point `(x_1, …, x_p)` with `0 <= x_i <= m_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Point(pub Vec<u64>);

/// Position plus direction of travel: one residue modulo `2 m_i` per axis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PhaseState(Vec<u64>);

/// Per-axis direction choice; `false` steps forward on the phase circle,
/// `true` steps backward.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DirectionMask(Vec<bool>);

/// Parity vector `([x_1 + x_2]_2, …, [x_1 + x_p]_2)` of a lattice point.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OrbitIndex(pub Vec<u8>);

pub fn index_of(point: &Point) -> OrbitIndex {
    let coords = point.coords();
    match coords.split_first() {
        Some((&first, rest)) => OrbitIndex(rest.iter().map(|&x| ((first + x) % 2) as u8).collect()),
        None => OrbitIndex(Vec::new()),
    }
}

impl GridSpec {
    pub fn new(dims: impl Into<Vec<u64>>) -> Result<Self> {
        let dims = dims.into();
        if dims.len() < 2 {
            return Err(Error::TooFewDimensions(dims.len()));
        }
        if let Some(index) = dims.iter().position(|&m| m == 0) {
            return Err(Error::ZeroDimension { index });
        }
        // Residues up to 2·m_i must be representable.
        for &m in &dims {
            m.checked_mul(2)
                .ok_or(Error::Overflow("phase circle length"))?;
        }
        Ok(Self { dims })
    }

    /// Parses `"6,4"`-style comma separated dimensions.
    pub fn parse(input: &str) -> Result<Self> {
        let dims = parse_list(input, "dimension list")?;
        Self::new(dims)
    }

    pub fn dims(&self) -> &[u64] {
        &self.dims
    }

    pub fn arity(&self) -> usize {
        self.dims.len()
    }

    pub fn lcm(&self) -> Result<u64> {
        arith::lcm_all(&self.dims)
    }

    /// Number of phase states, `∏ 2 m_i`.
    pub fn state_count(&self) -> Result<u64> {
        arith::product(self.dims.iter().map(|&m| 2 * m), "phase state count")
    }

    /// Number of lattice points, `∏ (m_i + 1)`.
    pub fn point_count(&self) -> Result<u64> {
        arith::product(self.dims.iter().map(|&m| m + 1), "lattice point count")
    }

    fn check_arity(&self, got: usize) -> Result<()> {
        if got == self.arity() {
            Ok(())
        } else {
            Err(Error::ArityMismatch {
                expected: self.arity(),
                got,
            })
        }
    }

    pub fn check_point(&self, point: &Point) -> Result<()> {
        self.check_arity(point.0.len())?;
        for (index, (&value, &max)) in point.0.iter().zip(&self.dims).enumerate() {
            if value > max {
                return Err(Error::PointOutOfRange { index, value, max });
            }
        }
        Ok(())
    }

    pub fn check_state(&self, state: &PhaseState) -> Result<()> {
        self.check_arity(state.0.len())?;
        for (index, (&value, &m)) in state.0.iter().zip(&self.dims).enumerate() {
            if value >= 2 * m {
                return Err(Error::ResidueOutOfRange {
                    index,
                    value,
                    modulus: 2 * m,
                });
            }
        }
        Ok(())
    }

    pub fn check_mask(&self, mask: &DirectionMask) -> Result<()> {
        self.check_arity(mask.0.len())
    }

    pub fn project(&self, state: &PhaseState) -> Result<Point> {
        self.check_state(state)?;
        Ok(self.project_unchecked(state))
    }

    pub(crate) fn project_unchecked(&self, state: &PhaseState) -> Point {
        Point(
            state
                .0
                .iter()
                .zip(&self.dims)
                .map(|(&u, &m)| tent(m, u))
                .collect(),
        )
    }

    /// Chooses the phase representative of `point` on the branch selected by
    /// `mask`. Coordinates at `0` or `m_i` have a single representative.
    pub fn lift(&self, point: &Point, mask: &DirectionMask) -> Result<PhaseState> {
        self.check_point(point)?;
        self.check_mask(mask)?;
        Ok(PhaseState(
            point
                .0
                .iter()
                .zip(&self.dims)
                .zip(&mask.0)
                .map(|((&x, &m), &back)| if back { (2 * m - x) % (2 * m) } else { x })
                .collect(),
        ))
    }

    pub fn lift_ascending(&self, point: &Point) -> Result<PhaseState> {
        self.lift(point, &DirectionMask::ascending(self.arity()))
    }

    /// One unit diagonal forward: `u_i ← u_i + 1 (mod 2 m_i)`.
    ///
    /// Panics if the state's arity differs from the grid's.
    pub fn step(&self, state: &PhaseState) -> PhaseState {
        self.map_state(state, |u, m| if u + 1 == 2 * m { 0 } else { u + 1 })
    }

    /// Inverse of [`GridSpec::step`].
    pub fn step_back(&self, state: &PhaseState) -> PhaseState {
        self.map_state(state, |u, m| if u == 0 { 2 * m - 1 } else { u - 1 })
    }

    /// Time reversal `u_i ← −u_i`; same position, opposite direction.
    pub fn reverse(&self, state: &PhaseState) -> PhaseState {
        self.map_state(state, |u, m| (2 * m - u) % (2 * m))
    }

    pub fn step_directed(&self, state: &PhaseState, mask: &DirectionMask) -> Result<PhaseState> {
        self.check_arity(state.0.len())?;
        self.check_mask(mask)?;
        Ok(PhaseState(
            state
                .0
                .iter()
                .zip(&self.dims)
                .zip(&mask.0)
                .map(|((&u, &m), &back)| match (back, u) {
                    (false, u) if u + 1 == 2 * m => 0,
                    (false, u) => u + 1,
                    (true, 0) => 2 * m - 1,
                    (true, u) => u - 1,
                })
                .collect(),
        ))
    }

    /// Advances `n` steps at once.
    pub fn advance(&self, state: &PhaseState, n: u64) -> PhaseState {
        self.map_state(state, |u, m| {
            ((u as u128 + n as u128) % (2 * m) as u128) as u64
        })
    }

    fn map_state(&self, state: &PhaseState, f: impl Fn(u64, u64) -> u64) -> PhaseState {
        assert_eq!(
            state.0.len(),
            self.arity(),
            "phase state arity does not match grid"
        );
        PhaseState(
            state
                .0
                .iter()
                .zip(&self.dims)
                .map(|(&u, &m)| f(u, m))
                .collect(),
        )
    }

    /// True if every coordinate sits at `0` or `m_i`, i.e. the state projects
    /// onto a corner of the grid.
    pub fn is_vertex_state(&self, state: &PhaseState) -> bool {
        state
            .0
            .iter()
            .zip(&self.dims)
            .all(|(&u, &m)| u == 0 || u == m)
    }

    /// True if some coordinate sits at `0` or `m_i`.
    pub fn is_boundary_state(&self, state: &PhaseState) -> bool {
        state
            .0
            .iter()
            .zip(&self.dims)
            .any(|(&u, &m)| u == 0 || u == m)
    }

    /// All phase states in lexicographic order.
    pub fn states(&self) -> impl Iterator<Item = PhaseState> + '_ {
        let radices: Vec<u64> = self.dims.iter().map(|&m| 2 * m).collect();
        MixedRadix::new(radices).map(PhaseState)
    }

    /// All lattice points in lexicographic order.
    pub fn points(&self) -> impl Iterator<Item = Point> + '_ {
        let radices: Vec<u64> = self.dims.iter().map(|&m| m + 1).collect();
        MixedRadix::new(radices).map(Point)
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.dims.iter().map(u64::to_string).collect();
        f.write_str(&parts.join("×"))
    }
}

impl Point {
    pub fn new(coords: impl Into<Vec<u64>>) -> Self {
        Self(coords.into())
    }

    pub fn parse(input: &str) -> Result<Self> {
        parse_list(input, "point").map(Self)
    }

    pub fn coords(&self) -> &[u64] {
        &self.0
    }

    pub fn index(&self) -> OrbitIndex {
        index_of(self)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl PhaseState {
    pub fn new(grid: &GridSpec, residues: impl Into<Vec<u64>>) -> Result<Self> {
        let state = Self(residues.into());
        grid.check_state(&state)?;
        Ok(state)
    }

    /// Reduces arbitrary integers onto the phase circles of `grid`.
    pub fn from_unreduced(grid: &GridSpec, raw: &[i64]) -> Result<Self> {
        grid.check_arity(raw.len())?;
        Ok(Self(
            raw.iter()
                .zip(grid.dims())
                .map(|(&v, &m)| (v as i128).rem_euclid(2 * m as i128) as u64)
                .collect(),
        ))
    }

    pub(crate) fn from_vec(residues: Vec<u64>) -> Self {
        Self(residues)
    }

    pub fn residues(&self) -> &[u64] {
        &self.0
    }
}

impl DirectionMask {
    pub fn ascending(arity: usize) -> Self {
        Self(vec![false; arity])
    }

    pub fn descending(arity: usize) -> Self {
        Self(vec![true; arity])
    }

    /// Builds a mask from `0/1` signs (`1` = backward).
    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        bits.iter()
            .map(|&b| match b {
                0 => Ok(false),
                1 => Ok(true),
                _ => Err(Error::Parse {
                    what: "direction mask",
                    input: format!("{bits:?}"),
                }),
            })
            .collect::<Result<Vec<_>>>()
            .map(Self)
    }

    /// Parses a string of `+` (forward) and `-` (backward) characters.
    pub fn parse(input: &str) -> Result<Self> {
        let err = || Error::Parse {
            what: "direction mask",
            input: input.to_string(),
        };
        let signs = input
            .trim()
            .chars()
            .map(|c| match c {
                '+' => Ok(false),
                '-' | '−' => Ok(true),
                _ => Err(err()),
            })
            .collect::<Result<Vec<_>>>()?;
        if signs.is_empty() {
            return Err(err());
        }
        Ok(Self(signs))
    }

    /// Every mask of the given arity, forward before backward, first axis
    /// most significant.
    pub fn all(arity: usize) -> impl Iterator<Item = DirectionMask> {
        assert!(arity < 64);
        (0u64..1 << arity).map(move |code| {
            Self(
                (0..arity)
                    .map(|i| code >> (arity - 1 - i) & 1 == 1)
                    .collect(),
            )
        })
    }

    pub fn is_backward(&self, axis: usize) -> bool {
        self.0[axis]
    }

    pub fn bits(&self) -> Vec<u8> {
        self.0.iter().map(|&b| b as u8).collect()
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }
}

impl fmt::Display for DirectionMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &back in &self.0 {
            f.write_str(if back { "-" } else { "+" })?;
        }
        Ok(())
    }
}

impl OrbitIndex {
    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    /// All `2^(p-1)` indexes for a `p`-dimensional grid, lexicographically.
    pub fn all(arity: usize) -> impl Iterator<Item = OrbitIndex> {
        let len = arity.saturating_sub(1);
        DirectionMask::all(len).map(|m| OrbitIndex(m.bits()))
    }
}

impl fmt::Display for OrbitIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u8::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

fn parse_list(input: &str, what: &'static str) -> Result<Vec<u64>> {
    let err = || Error::Parse {
        what,
        input: input.to_string(),
    };
    if input.trim().is_empty() {
        return Err(err());
    }
    input
        .split(',')
        .map(|s| s.trim().parse::<u64>().map_err(|_| err()))
        .collect()
}

/// Lexicographic counter over `∏ [0, radix_i)`.
struct MixedRadix {
    radices: Vec<u64>,
    current: Option<Vec<u64>>,
}

impl MixedRadix {
    fn new(radices: Vec<u64>) -> Self {
        let current = if radices.iter().all(|&r| r > 0) {
            Some(vec![0; radices.len()])
        } else {
            None
        };
        Self { radices, current }
    }
}

impl Iterator for MixedRadix {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        let out = self.current.clone()?;
        let cur = self.current.as_mut().unwrap();
        let mut axis = cur.len();
        loop {
            if axis == 0 {
                self.current = None;
                break;
            }
            axis -= 1;
            cur[axis] += 1;
            if cur[axis] < self.radices[axis] {
                break;
            }
            cur[axis] = 0;
        }
        Some(out)
    }
}
