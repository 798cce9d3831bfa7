//! Diagonal walks: moving from point to point along unit-cell diagonals in
//! any of the `2^p` directions, reflecting at the walls.
//!
//! Each move shifts every coordinate by one, so the parities of `x_1 + x_j`
//! are conserved; points sharing an [`OrbitIndex`] are mutually reachable.

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::billiards::{decode, strides, DEFAULT_STATE_CAP};
use crate::error::{Error, Result};
use crate::grid::{index_of, DirectionMask, GridSpec, OrbitIndex, PhaseState, Point};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitSummary {
    pub index: OrbitIndex,
    pub size: u64,
    pub sample: Point,
}

pub fn same_orbit(grid: &GridSpec, p1: &Point, p2: &Point) -> Result<bool> {
    grid.check_point(p1)?;
    grid.check_point(p2)?;
    Ok(index_of(p1) == index_of(p2))
}

/// Closed-form size of the orbit with the given index: points with `x_1`
/// even and `x_i ≡ δ_{i−1}`, plus points with `x_1` odd and `x_i ≢ δ_{i−1}`.
pub fn orbit_size(grid: &GridSpec, index: &OrbitIndex) -> Result<u64> {
    if index.bits().len() + 1 != grid.arity() {
        return Err(Error::ArityMismatch {
            expected: grid.arity() - 1,
            got: index.bits().len(),
        });
    }
    let overflow = || Error::Overflow("orbit size");
    // δ_0 = 0 pins the parity class of the first axis.
    let deltas: Vec<u8> = std::iter::once(0)
        .chain(index.bits().iter().copied())
        .collect();
    let half_product = |shift: u8| -> Option<u64> {
        grid.dims()
            .iter()
            .zip(&deltas)
            .try_fold(1u64, |acc, (&m, &d)| {
                let count = m + 1;
                let odd = count % 2;
                let factor = if (d + shift).is_multiple_of(2) {
                    (count + odd) / 2
                } else {
                    (count - odd) / 2
                };
                acc.checked_mul(factor)
            })
    };
    half_product(0)
        .zip(half_product(1))
        .and_then(|(a, b)| a.checked_add(b))
        .ok_or_else(overflow)
}

/// One summary per orbit index, lexicographic in the index bits.
pub fn orbit_partition(grid: &GridSpec) -> Result<Vec<OrbitSummary>> {
    OrbitIndex::all(grid.arity())
        .map(|index| {
            let size = orbit_size(grid, &index)?;
            let sample = Point::new(
                std::iter::once(0)
                    .chain(index.bits().iter().map(|&b| b as u64))
                    .collect::<Vec<_>>(),
            );
            Ok(OrbitSummary {
                index,
                size,
                sample,
            })
        })
        .collect()
}

/// Counts lattice points per index by visiting every point.
pub fn orbit_sizes_bruteforce(grid: &GridSpec, cap: u64) -> Result<BTreeMap<OrbitIndex, u64>> {
    point_budget(grid, cap, "orbit size count")?;
    let dims = grid.dims();
    let p = dims.len();
    let (head, last) = dims.split_at(p - 1);
    let last = last[0];
    // Index bits packed with bit j−1 holding the parity of x_1 + x_j.
    let mut counts = vec![0u64; 1 << (p - 1)];
    let mut coords = vec![0u64; p - 1];
    loop {
        let x1 = coords[0];
        let prefix = coords[1..]
            .iter()
            .enumerate()
            .fold(0usize, |code, (j, &x)| {
                code | ((((x1 + x) & 1) as usize) << j)
            });
        for x in 0..=last {
            counts[prefix | ((((x1 + x) & 1) as usize) << (p - 2))] += 1;
        }
        // odometer over all axes but the last
        let mut axis = p - 1;
        loop {
            if axis == 0 {
                return Ok(collect_counts(&counts, p));
            }
            axis -= 1;
            if coords[axis] < head[axis] {
                coords[axis] += 1;
                break;
            }
            coords[axis] = 0;
        }
    }
}

fn collect_counts(counts: &[u64], p: usize) -> BTreeMap<OrbitIndex, u64> {
    counts
        .iter()
        .enumerate()
        .filter(|(_, &n)| n > 0)
        .map(|(code, &n)| {
            let bits = (0..p - 1).map(|j| ((code >> j) & 1) as u8).collect();
            (OrbitIndex(bits), n)
        })
        .collect()
}

/// Connected components of the diagonal-move graph, by breadth-first search.
///
/// Returns one component label per lattice point (lexicographic point order)
/// together with the number of components. Labels are assigned in order of
/// first discovery.
pub fn connectivity_partition(grid: &GridSpec, cap: u64) -> Result<(Vec<u32>, u32)> {
    let total = point_budget(grid, cap, "connectivity partition")?;
    let dims = grid.dims();
    let strides = strides(dims.iter().map(|&m| m + 1));
    // Per axis and coordinate value: flat offsets of the reflected neighbours
    // below and above. At a wall both coincide.
    let offsets: Vec<Vec<(usize, usize)>> = dims
        .iter()
        .zip(&strides)
        .map(|(&m, &s)| {
            (0..=m)
                .map(|x| {
                    let lo = if x == 0 { 1 } else { x - 1 };
                    let hi = if x == m { m - 1 } else { x + 1 };
                    (lo as usize * s, hi as usize * s)
                })
                .collect()
        })
        .collect();

    const UNSEEN: u32 = u32::MAX;
    let mut label = vec![UNSEEN; total];
    let mut queue: Vec<u32> = Vec::with_capacity(total);
    let mut coords = vec![0u64; dims.len()];
    let mut targets: Vec<usize> = Vec::with_capacity(1 << dims.len());
    let mut components = 0u32;
    for seed in 0..total {
        if label[seed] != UNSEEN {
            continue;
        }
        label[seed] = components;
        queue.clear();
        queue.push(seed as u32);
        let mut head = 0;
        while head < queue.len() {
            let idx = queue[head] as usize;
            head += 1;
            decode(idx, &strides, dims.iter().copied(), &mut coords);
            targets.clear();
            targets.push(0);
            for (axis, &x) in coords.iter().enumerate() {
                let (lo, hi) = offsets[axis][x as usize];
                let n = targets.len();
                if lo != hi {
                    targets.extend_from_within(..n);
                    for t in &mut targets[n..] {
                        *t += hi;
                    }
                }
                for t in &mut targets[..n] {
                    *t += lo;
                }
            }
            for &t in &targets {
                if label[t] == UNSEEN {
                    label[t] = components;
                    queue.push(t as u32);
                }
            }
        }
        components += 1;
    }
    Ok((label, components))
}

/// Shortest diagonal walk from `p1` to `p2`, as the masks to feed
/// [`GridSpec::step_directed`] starting from the ascending lift of `p1`.
///
/// Breadth-first over lattice points; masks are tried in lexicographic order
/// and the first shortest walk wins. `None` if `p2` is unreachable.
pub fn find_walk(grid: &GridSpec, p1: &Point, p2: &Point) -> Result<Option<Vec<DirectionMask>>> {
    grid.check_point(p1)?;
    grid.check_point(p2)?;
    let total = point_budget(grid, DEFAULT_STATE_CAP, "walk search")?;
    let strides = strides(grid.dims().iter().map(|&m| m + 1));
    let flat = |p: &Point| -> usize {
        p.coords()
            .iter()
            .zip(&strides)
            .map(|(&x, &s)| x as usize * s)
            .sum()
    };
    let masks: Vec<DirectionMask> = DirectionMask::all(grid.arity()).collect();

    let start = flat(p1);
    let goal = flat(p2);
    // parent point and the mask index that reached each visited point
    let mut parent: Vec<Option<(usize, u32)>> = vec![None; total];
    let mut carried: Vec<Option<PhaseState>> = vec![None; total];
    carried[start] = Some(grid.lift_ascending(p1)?);
    let mut queue = VecDeque::from([start]);
    while let Some(idx) = queue.pop_front() {
        if idx == goal {
            break;
        }
        let state = carried[idx].clone().expect("queued points carry a state");
        for (mi, mask) in masks.iter().enumerate() {
            let next = grid.step_directed(&state, mask)?;
            let nidx = flat(&grid.project_unchecked(&next));
            if carried[nidx].is_none() {
                carried[nidx] = Some(next);
                parent[nidx] = Some((idx, mi as u32));
                queue.push_back(nidx);
            }
        }
    }
    if carried[goal].is_none() {
        return Ok(None);
    }
    let mut walk = Vec::new();
    let mut at = goal;
    while at != start {
        let (prev, mi) = parent[at].expect("visited points have a parent");
        walk.push(masks[mi as usize].clone());
        at = prev;
    }
    walk.reverse();
    Ok(Some(walk))
}

/// Applies `masks` in order from the ascending lift of `start`.
pub fn replay_walk(grid: &GridSpec, start: &Point, masks: &[DirectionMask]) -> Result<Point> {
    let mut state = grid.lift_ascending(start)?;
    for mask in masks {
        state = grid.step_directed(&state, mask)?;
    }
    grid.project(&state)
}

fn point_budget(grid: &GridSpec, cap: u64, what: &'static str) -> Result<usize> {
    let needed = grid
        .dims()
        .iter()
        .try_fold(1u128, |acc, &m| acc.checked_mul(m as u128 + 1))
        .unwrap_or(u128::MAX);
    if needed > cap as u128 || needed > u32::MAX as u128 {
        return Err(Error::BudgetExceeded { what, needed, cap });
    }
    Ok(needed as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(dims: &[u64]) -> GridSpec {
        GridSpec::new(dims.to_vec()).unwrap()
    }

    fn idx(bits: &[u8]) -> OrbitIndex {
        OrbitIndex(bits.to_vec())
    }

    #[test]
    fn same_orbit_examples() {
        let grid = g(&[6, 4]);
        let p1 = Point::new([0, 2]);
        assert!(same_orbit(&grid, &p1, &Point::new([4, 0])).unwrap());
        assert!(!same_orbit(&grid, &p1, &Point::new([6, 1])).unwrap());
        assert!(same_orbit(&grid, &p1, &p1).unwrap());

        let cube = g(&[1, 1, 1]);
        let origin = Point::new([0, 0, 0]);
        assert!(same_orbit(&cube, &origin, &Point::new([1, 1, 1])).unwrap());
        assert!(!same_orbit(&cube, &origin, &Point::new([1, 0, 0])).unwrap());
        assert!(same_orbit(&cube, &origin, &Point::new([0, 0])).is_err());
    }

    #[test]
    fn orbit_size_examples() {
        let grid = g(&[6, 4]);
        assert_eq!(orbit_size(&grid, &idx(&[0])).unwrap(), 18);
        assert_eq!(orbit_size(&grid, &idx(&[1])).unwrap(), 17);
        let cube = g(&[1, 1, 1]);
        for index in OrbitIndex::all(3) {
            assert_eq!(orbit_size(&cube, &index).unwrap(), 2);
        }
        assert!(orbit_size(&grid, &idx(&[0, 1])).is_err());
    }

    #[test]
    fn even_grids_have_one_extra_even_point() {
        for m in 1..=12 {
            for n in 1..=12 {
                let grid = g(&[m, n]);
                let even = orbit_size(&grid, &idx(&[0])).unwrap();
                let odd = orbit_size(&grid, &idx(&[1])).unwrap();
                let expected = if m % 2 == 0 && n % 2 == 0 {
                    odd + 1
                } else {
                    odd
                };
                assert_eq!(even, expected, "{m}×{n}");
            }
        }
    }

    #[test]
    fn partition_examples() {
        let parts = orbit_partition(&g(&[6, 4])).unwrap();
        let sizes: Vec<u64> = parts.iter().map(|s| s.size).collect();
        assert_eq!(sizes, [18, 17]);
        let parts = orbit_partition(&g(&[1, 1])).unwrap();
        assert_eq!(parts.iter().map(|s| s.size).collect::<Vec<_>>(), [2, 2]);
        let parts = orbit_partition(&g(&[4, 3, 2])).unwrap();
        assert_eq!(parts.len(), 4);
        assert_eq!(parts.iter().map(|s| s.size).sum::<u64>(), 60);
        for s in &parts {
            assert_eq!(index_of(&s.sample), s.index);
        }
    }

    #[test]
    fn size_formula_matches_count_small_grids() {
        for p in 2..=4usize {
            let mut dims = vec![1u64; p];
            loop {
                let grid = g(&dims);
                let brute = orbit_sizes_bruteforce(&grid, DEFAULT_STATE_CAP).unwrap();
                assert_eq!(brute.len(), 1 << (p - 1));
                for (index, count) in brute {
                    assert_eq!(orbit_size(&grid, &index).unwrap(), count, "{grid} {index}");
                }
                // odometer over 1..=6 per axis (p = 4 stops at 4 to stay quick)
                let top = if p == 4 { 4 } else { 6 };
                let mut axis = 0;
                while axis < p && dims[axis] == top {
                    dims[axis] = 1;
                    axis += 1;
                }
                if axis == p {
                    break;
                }
                dims[axis] += 1;
            }
        }
    }

    #[test]
    fn packed_count_agrees_with_point_iteration() {
        for dims in [[1, 1, 1], [2, 5, 3], [4, 1, 6], [3, 3, 2]] {
            let grid = g(&dims);
            let mut naive = BTreeMap::new();
            for p in grid.points() {
                *naive.entry(index_of(&p)).or_insert(0u64) += 1;
            }
            assert_eq!(
                orbit_sizes_bruteforce(&grid, DEFAULT_STATE_CAP).unwrap(),
                naive
            );
        }
    }

    #[test]
    fn connectivity_matches_index() {
        for dims in [
            vec![6u64, 4],
            vec![1, 1],
            vec![1, 1, 1],
            vec![3, 2, 5],
            vec![2, 2, 2, 2],
        ] {
            let grid = g(&dims);
            let (labels, count) = connectivity_partition(&grid, DEFAULT_STATE_CAP).unwrap();
            assert_eq!(count, 1 << (dims.len() - 1));
            let mut seen: BTreeMap<u32, OrbitIndex> = BTreeMap::new();
            for (p, l) in grid.points().zip(labels) {
                let i = index_of(&p);
                assert_eq!(seen.entry(l).or_insert_with(|| i.clone()), &i);
            }
        }
    }

    #[test]
    fn every_move_preserves_index() {
        let grid = g(&[3, 4, 2]);
        for s in grid.states() {
            let here = index_of(&grid.project(&s).unwrap());
            for mask in DirectionMask::all(3) {
                let next = grid
                    .project(&grid.step_directed(&s, &mask).unwrap())
                    .unwrap();
                assert_eq!(index_of(&next), here);
            }
        }
    }

    #[test]
    fn walk_examples() {
        let grid = g(&[6, 4]);
        let (p1, p2) = (Point::new([0, 2]), Point::new([4, 0]));
        let walk = find_walk(&grid, &p1, &p2).unwrap().unwrap();
        assert_eq!(walk.len(), 4);
        assert_eq!(replay_walk(&grid, &p1, &walk).unwrap(), p2);
        assert_eq!(find_walk(&grid, &p1, &Point::new([6, 1])).unwrap(), None);
        assert_eq!(find_walk(&grid, &p1, &p1).unwrap(), Some(vec![]));

        let cube = g(&[1, 1, 1]);
        assert_eq!(
            find_walk(&cube, &Point::new([0, 0, 0]), &Point::new([1, 0, 0])).unwrap(),
            None
        );
    }

    #[test]
    fn walks_exist_exactly_within_an_orbit() {
        let grid = g(&[3, 2, 2]);
        let points: Vec<Point> = grid.points().collect();
        for a in &points {
            for b in &points {
                let walk = find_walk(&grid, a, b).unwrap();
                assert_eq!(walk.is_some(), same_orbit(&grid, a, b).unwrap());
                if let Some(w) = walk {
                    assert_eq!(&replay_walk(&grid, a, &w).unwrap(), b);
                }
            }
        }
    }
}
