//! Multidimensional lifts: from line existence to subspace existence, and
//! from subspaces of `[k]^n` to restricted subspaces of `[k+1]^n`.

use super::{dens, EngineConfig, NotMet, Uniformized};
use crate::cube::{Cube, Subspace, Word};
use crate::error::{Error, Result};
use crate::ratio::{fmt_q, q_int, Q};
use crate::search::{subspace_contained, SearchOutcome};
use crate::set::PointSet;
use crate::trace::ProcedureTrace;
use num::Zero;

/// Outcome of a lift.
#[derive(Clone, Debug)]
pub enum Lifted {
    Found { subspace: Subspace, trace: ProcedureTrace },
    Exhausted { why: NotMet, trace: ProcedureTrace },
}

impl Lifted {
    pub fn subspace(self) -> Option<Subspace> {
        match self {
            Lifted::Found { subspace, .. } => Some(subspace),
            Lifted::Exhausted { .. } => None,
        }
    }
}

/// Resolves the suffix block length `M = dhj(k, delta/2)`: oracle table
/// first, then the explicit override; never guessed.
fn lift_block(cfg: &EngineConfig, k: u16, delta: &Q) -> Result<u16> {
    let half = delta.clone() / q_int(2);
    if let Ok(v) = cfg.table.dhj(k, &half) {
        return v.try_into().map_err(|_| {
            Error::ParameterOutOfRange(format!("dhj({k}, {}) too large for a block", fmt_q(&half)))
        });
    }
    cfg.lift_block.ok_or_else(|| {
        Error::MissingOracleValue(format!("dhj({k}, {}) (lift block; supply a table entry or an override)", fmt_q(&half)))
    })
}

/// Builds an `m`-dimensional subspace inside `A` by the inductive
/// construction: slice off a suffix block of length `M`, find a line in
/// every dense slice, vote for the most common line, and recurse on the
/// set of prefixes that carry the winner.
pub fn multidim_lift(a: &PointSet, m: u16, cfg: &EngineConfig) -> Result<Lifted> {
    if m < 1 {
        return Err(Error::ParameterOutOfRange("m must be >= 1".into()));
    }
    let mut trace = ProcedureTrace::new("multidim_lift", cfg.has_overrides());
    trace.param_int("m", m as u64);
    trace.param("density", &dens(a));
    match lift_rec(a, m, cfg, &mut trace, 1)? {
        Ok(subspace) => {
            if !subspace_contained(a, &subspace)? {
                return Err(Error::internal("multidim_lift", "containment recheck failed"));
            }
            if subspace.dimension() != m {
                return Err(Error::internal("multidim_lift", "dimension recheck failed"));
            }
            trace.finish("success");
            Ok(Lifted::Found { subspace, trace })
        }
        Err(why) => {
            trace.finish(format!("exhausted: {}", why.stage));
            Ok(Lifted::Exhausted { why, trace })
        }
    }
}

type StageResult = std::result::Result<Subspace, NotMet>;

fn lift_rec(
    a: &PointSet,
    m: u16,
    cfg: &EngineConfig,
    trace: &mut ProcedureTrace,
    level: u64,
) -> Result<StageResult> {
    let cube = a.cube();
    let k = cube.k();
    if m == 1 {
        return Ok(match cfg.line_search(a)? {
            SearchOutcome::Found(line) => Ok(line.subspace().clone()),
            SearchOutcome::NotFound => Err(NotMet::new("line search", "no line in the base set")),
            SearchOutcome::Exhausted => Err(NotMet::new("line search", "budget exhausted")),
        });
    }
    let delta = dens(a);
    if delta.is_zero() {
        return Ok(Err(NotMet::new("lift", "empty set")));
    }
    let block = lift_block(cfg, k, &delta)?;
    if block >= cube.n() {
        return Ok(Err(NotMet::new(
            "lift block",
            format!("block length {block} leaves no prefix in n = {}", cube.n()),
        )));
    }
    let prefix_cube = Cube::new(k, cube.n() - block)?;
    let half = delta.clone() / q_int(2);

    // Dense prefixes and their first lines.
    let mut votes: Vec<(crate::cube::Line, usize)> = Vec::new();
    let mut dense_prefixes = Vec::new();
    for x in prefix_cube.words() {
        let slice = a.slice(&x)?;
        if dens(&slice) >= half {
            let line = match cfg.line_search(&slice)? {
                SearchOutcome::Found(line) => line,
                SearchOutcome::NotFound => {
                    return Ok(Err(NotMet::new(
                        "slice line search",
                        format!("no line in the slice at prefix {x}"),
                    )))
                }
                SearchOutcome::Exhausted => {
                    return Ok(Err(NotMet::new("slice line search", "budget exhausted")))
                }
            };
            match votes.iter_mut().find(|(l, _)| *l == line) {
                Some((_, count)) => *count += 1,
                None => votes.push((line, 1)),
            }
            dense_prefixes.push(x);
        }
    }
    if votes.is_empty() {
        return Ok(Err(NotMet::new("prefix vote", "no slice of density >= delta/2")));
    }
    // Most common line; ties to the lexicographically least generator.
    let winner = votes
        .iter()
        .max_by(|(la, ca), (lb, cb)| ca.cmp(cb).then_with(|| lb.generator().cmp(la.generator())))
        .expect("nonempty votes")
        .0
        .clone();
    // All prefixes whose slice carries the winner, not only the voters.
    let mut carriers = PointSet::empty(prefix_cube);
    for x in prefix_cube.words() {
        let slice = a.slice(&x)?;
        if winner.points_iter().all(|p| slice.contains_index(p.index())) {
            carriers.insert_index(x.index());
        }
    }
    trace
        .step(level, "block vote", Some(winner.to_string()))
        .quantity("delta", &delta)
        .quantity("carrier_density", &dens(&carriers))
        .quantity_str("block", block.to_string());
    let prefix_part = match lift_rec(&carriers, m - 1, cfg, trace, level + 1)? {
        Ok(w) => w,
        Err(why) => return Ok(Err(why)),
    };
    let generator = prefix_part.generator().concat_vw(winner.generator())?;
    Ok(Ok(Subspace::new(generator)))
}

/// Resolves the uniformization dimension `M = mdhj(k, m, delta/2)`:
/// table/recursion first, then the explicit override.
fn restricted_block(cfg: &EngineConfig, k: u16, m: u16, delta: &Q) -> Result<u16> {
    let half = delta.clone() / q_int(2);
    if let Ok(v) = crate::bounds::mdhj_bound(k, m as u64, &half, cfg.table) {
        if let Some(i) = v.as_int() {
            return i.try_into().map_err(|_| {
                Error::ParameterOutOfRange("mdhj value too large for a block".into())
            });
        }
    }
    cfg.uniformize_dim.ok_or_else(|| {
        Error::MissingOracleValue(format!(
            "mdhj({k}, {m}, {}) (restricted lift block; supply table entries or an override)",
            fmt_q(&half)
        ))
    })
}

/// Finds an `m`-dimensional subspace `V` of the ambient `[k+1]^n` with
/// `V ↾ k` inside `A`: uniformize to an `M`-dimensional block, restrict
/// it to `[k]`, pick the densest fiber over the restricted block, lift
/// inside the `[k]^M` model, and re-embed.
pub fn restricted_lift(a: &PointSet, m: u16, cfg: &EngineConfig) -> Result<Lifted> {
    let ambient = a.cube();
    let big_k = ambient.k();
    if big_k < 3 {
        return Err(Error::ParameterOutOfRange("restricted lift needs an alphabet of size >= 3".into()));
    }
    let k = big_k - 1;
    let mut trace = ProcedureTrace::new("restricted_lift", cfg.has_overrides());
    trace.param_int("m", m as u64);
    let delta = dens(a);
    trace.param("density", &delta);
    if delta.is_zero() {
        let why = NotMet::new("restricted lift", "empty set");
        trace.finish("exhausted: empty set");
        return Ok(Lifted::Exhausted { why, trace });
    }
    let block_dim = restricted_block(cfg, k, m, &delta)?;
    trace.param_int("block_dim", block_dim as u64);
    let half = delta.clone() / q_int(2);

    // Uniformize with eps = delta/2 at dimension M.
    let (prefix_len, big_w) = match super::uniformize(a, block_dim, &half)? {
        Uniformized::Done { prefix_len, block, trace: child } => {
            trace.children.push(child);
            (prefix_len, block)
        }
        Uniformized::Exhausted { trace: child } => {
            trace.children.push(child);
            let why = NotMet::new("uniformize", "no room for the block walk");
            trace.finish("exhausted: uniformize");
            return Ok(Lifted::Exhausted { why, trace });
        }
    };

    // Densest fiber y0 over the restricted block Z = W ↾ k.
    let restricted_model = Cube::new(k, block_dim)?;
    let fiber_cube = Cube::new(big_k, ambient.n() - prefix_len)?;
    let mut best: Option<(usize, Word)> = None;
    for y in fiber_cube.words() {
        let mut count = 0usize;
        for a_idx in 0..restricted_model.point_count() {
            let a_word = restricted_model.word_from_index(a_idx);
            let z = big_w.generator().instantiate(a_word.letters())?;
            if a.contains_index(z.concat(&y)?.index()) {
                count += 1;
            }
        }
        if best.as_ref().map_or(true, |(c, _)| count > *c) {
            best = Some((count, y));
        }
    }
    let (count, y0) = best.expect("fiber cube is nonempty");
    let fiber_density = Q::new(count.into(), restricted_model.point_count().into());
    trace
        .step(1, "densest fiber", Some(y0.to_string()))
        .quantity("fiber_density", &fiber_density);
    if fiber_density < half {
        // The average over fibers equals the average slice density over Z,
        // which uniformization made at least delta/2.
        return Err(Error::internal("restricted_lift", "densest fiber below delta/2"));
    }

    // The fiber model E ⊆ [k]^M over alphabet k and the inner lift.
    let fiber_model = PointSet::from_fn(restricted_model, |a_word| {
        let z = big_w.generator().instantiate(a_word.letters()).expect("arity matches");
        let zy = z.concat(&y0).expect("same alphabet");
        a.contains_index(zy.index())
    });
    let inner = match multidim_lift(&fiber_model, m, cfg)? {
        Lifted::Found { subspace, trace: child } => {
            trace.children.push(child);
            subspace
        }
        Lifted::Exhausted { why, trace: child } => {
            trace.children.push(child);
            let why = NotMet::new("inner lift", why.details);
            trace.finish("exhausted: inner lift");
            return Ok(Lifted::Exhausted { why, trace });
        }
    };

    // Re-embed: V = (W ∘ inner) ⌢ y0, an m-dimensional subspace of the
    // full ambient whose k-restriction lies in A.
    let composed = big_w.generator().compose(inner.generator())?;
    let generator = composed.concat_word(&y0)?;
    let subspace = Subspace::new(generator);
    let restriction = subspace.restrict(k)?;
    if !restriction.is_subset_of(a)? {
        return Err(Error::internal("restricted_lift", "restriction recheck failed"));
    }
    trace.finish("success");
    Ok(Lifted::Found { subspace, trace })
}
