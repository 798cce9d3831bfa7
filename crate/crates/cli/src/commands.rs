//! One function per subcommand. Each returns the JSON payload plus whether
//! every internal cross-check held.

use std::path::Path as FsPath;

use arith_billiards::{
    arith, circ_seq, count_closed, count_open, enumerate_paths_with_cap, gen_function,
    geometric_length, light_reachable, light_reachable_oracle, orbit_partition,
    orbit_sizes_bruteforce, render_grid, series_expand, simulate, step_length, DirectionMask,
    Error, GridSpec, PathKind, Point, ReachAnswer, RenderOptions, SeqSpec, Sign,
};
use serde_json::{json, Value};

use crate::{Command, PathFilter};

pub const SCHEMA_VERSION: &str = "1";

pub struct Done {
    pub payload: Value,
    pub consistent: bool,
}

pub struct Failure {
    pub code: u8,
    pub message: String,
    /// Partial results that are still worth reporting.
    pub payload: Option<Value>,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BudgetExceeded { .. } => 3,
            // a failed exact division means the library disagrees with itself
            Error::InexactDivision(_) => 1,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
            payload: None,
        }
    }
}

type Outcome = Result<Done, Failure>;

pub fn run(command: &Command) -> Outcome {
    match command {
        Command::Count { grid, cap } => count(&GridSpec::parse(&grid.dims)?, *cap),
        Command::Simulate {
            grid,
            start,
            mask,
            steps,
        } => {
            let grid = GridSpec::parse(&grid.dims)?;
            simulate_cmd(
                &grid,
                &Point::parse(start)?,
                &mask_or_default(&grid, mask)?,
                *steps,
            )
        }
        Command::Reach {
            grid,
            from,
            to,
            mask,
            any_direction,
            verify,
        } => {
            let grid = GridSpec::parse(&grid.dims)?;
            let masks = if *any_direction {
                DirectionMask::all(grid.arity()).collect()
            } else {
                vec![mask_or_default(&grid, mask)?]
            };
            reach(
                &grid,
                &Point::parse(from)?,
                &Point::parse(to)?,
                &masks,
                *verify,
            )
        }
        Command::Orbits { grid, cap } => orbits(&GridSpec::parse(&grid.dims)?, *cap),
        Command::Genfunc { sign, t, m, expand } => genfunc(parse_sign(sign)?, *t, *m, *expand),
        Command::Render {
            grid,
            out,
            paths,
            cell_size,
            margin,
            palette,
        } => {
            let mut opts = RenderOptions::default();
            if let Some(c) = cell_size {
                opts.cell_size = *c;
            }
            if let Some(m) = margin {
                opts.margin = *m;
            }
            if let Some(p) = palette {
                opts.palette = p.split(',').map(|s| s.trim().to_string()).collect();
            }
            render(&GridSpec::parse(&grid.dims)?, out, *paths, &opts)
        }
    }
}

fn mask_or_default(grid: &GridSpec, mask: &Option<String>) -> Result<DirectionMask, Error> {
    let mask = match mask {
        Some(s) => DirectionMask::parse(s)?,
        None => DirectionMask::ascending(grid.arity()),
    };
    grid.check_mask(&mask)?;
    Ok(mask)
}

fn parse_sign(s: &str) -> Result<Sign, Error> {
    match s {
        "+" | "pos" | "positive" => Ok(Sign::Positive),
        "-" | "−" | "neg" | "negative" => Ok(Sign::Negative),
        _ => Err(Error::Parse {
            what: "sequence sign",
            input: s.to_string(),
        }),
    }
}

fn coords(points: &[Point]) -> Vec<&[u64]> {
    points.iter().map(Point::coords).collect()
}

fn count(grid: &GridSpec, cap: u64) -> Outcome {
    let closed = count_closed(grid)?;
    let open = count_open(grid)?;
    let k = step_length(grid)?;
    let product = arith::product(grid.dims().iter().copied(), "product of dimensions")?;
    let mut details = json!({ "lcm": grid.lcm()?, "product": product });
    if let [a, b] = *grid.dims() {
        details["gcd"] = json!(arith::gcd(a, b));
    }
    let mut payload = json!({
        "closed": closed,
        "open": open,
        "step_length": k,
        "geometric_length": {
            "steps": k,
            "per_step": format!("sqrt({})", grid.arity()),
            "approx": geometric_length(grid)?,
        },
        "details": details,
        "enumeration": null,
        "consistent": null,
    });

    let paths = match enumerate_paths_with_cap(grid, cap) {
        Ok(paths) => paths,
        Err(e @ Error::BudgetExceeded { .. }) => {
            return Err(Failure {
                payload: Some(payload),
                ..Failure::from(e)
            })
        }
        Err(e) => return Err(e.into()),
    };
    let enum_closed = paths.iter().filter(|p| p.kind == PathKind::Closed).count() as u64;
    let enum_open = paths.len() as u64 - enum_closed;
    let segments: u64 = paths.iter().map(|p| p.distinct_segments).sum();
    // every unit cell contributes 2^(p−1) undirected diagonals
    let expected_segments = product.checked_shl(grid.arity() as u32 - 1);
    let consistent =
        enum_closed == closed && enum_open == open && Some(segments) == expected_segments;
    payload["enumeration"] = json!({
        "closed": enum_closed,
        "open": enum_open,
        "distinct_segments": segments,
    });
    payload["consistent"] = json!(consistent);
    Ok(Done {
        payload,
        consistent,
    })
}

fn simulate_cmd(grid: &GridSpec, start: &Point, mask: &DirectionMask, steps: u64) -> Outcome {
    let t = simulate(grid, start, mask, steps)?;
    let first_return = (1..t.points.len()).find(|&k| t.points[k] == t.points[0]);
    let payload = json!({
        "start": start.coords(),
        "mask": mask.to_string(),
        "steps": steps,
        "points": coords(&t.points),
        "first_return": first_return,
        "closed_at": t.closed_at(grid),
        "step_length": step_length(grid)?,
    });
    Ok(Done {
        payload,
        consistent: true,
    })
}

fn reach(
    grid: &GridSpec,
    from: &Point,
    to: &Point,
    masks: &[DirectionMask],
    verify: bool,
) -> Outcome {
    let mut consistent = true;
    let mut per_mask = Vec::new();
    let mut best: Option<(&DirectionMask, ReachAnswer)> = None;
    for mask in masks {
        let answer = light_reachable(grid, from, mask, to)?;
        let mut entry = json!({
            "mask": mask.to_string(),
            "reachable": answer.reachable,
            "witness_steps": answer.witness_steps,
            "sign_choice": answer.sign_choice,
        });
        if verify {
            let agrees = light_reachable_oracle(grid, from, mask, to)? == answer;
            entry["oracle_agrees"] = json!(agrees);
            consistent &= agrees;
        }
        per_mask.push(entry);
        let better = match (&best, answer.witness_steps) {
            (_, None) => false,
            (None, Some(_)) => true,
            (Some((_, b)), Some(k)) => b.witness_steps.is_none_or(|bk| k < bk),
        };
        if better || best.is_none() {
            best = Some((mask, answer));
        }
    }
    let (mask, answer) = best.expect("at least one mask is tried");
    let payload = json!({
        "from": from.coords(),
        "to": to.coords(),
        "reachable": answer.reachable,
        "witness_steps": answer.witness_steps,
        "sign_choice": answer.sign_choice,
        "mask": mask.to_string(),
        "by_mask": per_mask,
        "oracle_checked": verify,
    });
    Ok(Done {
        payload,
        consistent,
    })
}

fn orbits(grid: &GridSpec, cap: u64) -> Outcome {
    let summaries = orbit_partition(grid)?;
    let (counted, budget) = match orbit_sizes_bruteforce(grid, cap) {
        Ok(counts) => (Some(counts), None),
        Err(e @ Error::BudgetExceeded { .. }) => (None, Some(e)),
        Err(e) => return Err(e.into()),
    };
    let mut consistent = true;
    let list: Vec<Value> = summaries
        .iter()
        .map(|s| {
            let brute = counted
                .as_ref()
                .map(|c| c.get(&s.index).copied().unwrap_or(0));
            let agree = brute.map(|b| b == s.size);
            consistent &= agree.unwrap_or(true);
            json!({
                "index": s.index.bits(),
                "sample": s.sample.coords(),
                "size_formula": s.size,
                "size_bruteforce": brute,
                "agree": agree,
            })
        })
        .collect();
    let total: u64 = summaries.iter().map(|s| s.size).sum();
    let points = grid.point_count()?;
    consistent &= total == points;
    let payload = json!({
        "orbits": list,
        "total_points": points,
        "consistent": consistent,
    });
    match budget {
        Some(e) => Err(Failure {
            payload: Some(payload),
            ..Failure::from(e)
        }),
        None => Ok(Done {
            payload,
            consistent,
        }),
    }
}

fn genfunc(sign: Sign, t: u64, m: u64, expand: Option<usize>) -> Outcome {
    let spec = SeqSpec::new(sign, t, m)?;
    let gf = gen_function(&spec)?;
    let mut consistent = true;
    let mut payload = json!({
        "sign": match sign { Sign::Positive => "+", Sign::Negative => "-" },
        "t": t,
        "m": m,
        "numerator_coeffs": gf.numerator.coeffs(),
        "numerator": gf.numerator.to_string(),
        "period": gf.period,
    });
    if let Some(n) = expand {
        let series = series_expand(&gf, n);
        consistent = series
            .iter()
            .enumerate()
            .all(|(i, &c)| c == circ_seq(&spec, i as u64) as i64);
        payload["expansion"] = json!(series);
        payload["consistent"] = json!(consistent);
    }
    Ok(Done {
        payload,
        consistent,
    })
}

fn render(grid: &GridSpec, out: &FsPath, filter: PathFilter, opts: &RenderOptions) -> Outcome {
    if grid.arity() != 2 {
        return Err(Error::NotPlanar(grid.arity()).into());
    }
    let paths = enumerate_paths_with_cap(grid, arith_billiards::DEFAULT_STATE_CAP)?;
    let traces = paths
        .iter()
        .filter(|p| match filter {
            PathFilter::All => true,
            PathFilter::Open => p.kind == PathKind::Open,
            PathFilter::Closed => p.kind == PathKind::Closed,
        })
        .map(|p| p.trace(grid))
        .collect::<Result<Vec<_>, _>>()?;
    let svg = render_grid(grid, &traces, opts)?;
    std::fs::write(out, &svg).map_err(|e| Failure {
        code: 4,
        message: format!("cannot write {}: {e}", out.display()),
        payload: None,
    })?;
    Ok(Done {
        payload: json!({
            "file": out.display().to_string(),
            "path_count": traces.len(),
            "bytes": svg.len(),
        }),
        consistent: true,
    })
}
