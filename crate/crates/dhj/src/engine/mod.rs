//! Executable forms of the constructive procedures behind the
//! density-increment method.
//!
//! Every procedure here runs the corresponding argument literally, at
//! whatever ambient size the caller supplies. The numeric hypotheses that
//! the theory needs to guarantee success are treated as metadata: when a
//! step cannot be completed at the given scale the procedure returns
//! `HypothesisNotMet` naming the stage and the measured quantities,
//! rather than guessing. When a step succeeds, its postconditions are
//! re-verified by independent exhaustive recomputation before returning;
//! a recheck failure is an internal error (a bug), never an input
//! property.
//!
//! Threshold numbers that the theory postulates (line thresholds,
//! partition dimensions, block lengths) are injected: they come from an
//! oracle table when available, from explicit toy overrides otherwise,
//! and are never silently guessed.

mod driver;
mod lift;
mod lines;
mod structured;
mod tiling;
mod uniformize;

pub use driver::{dhj_driver, dichotomy_step, DichotomyOutcome, DriverConfig, DriverOutcome, ParamSource};
pub use lift::{multidim_lift, restricted_lift, Lifted};
pub use lines::{extract_uniform_lines, line_dichotomy, LineDichotomy, UniformLines};
pub use structured::{correlate, structured_set, Correlated, Structured};
pub use tiling::{tile_insensitive, tile_intersection, TileOutcome, Tiling};
pub use uniformize::{uniformize, Uniformized};

use crate::bounds::OracleTable;
use crate::cube::{Cube, Line, Subspace, VariableWord, Word};
use crate::error::Result;
use crate::ratio::Q;
use crate::search::{self, GrBranch, SearchBudget, SearchOutcome};
use crate::set::PointSet;
use std::collections::HashSet;

/// Injected existence oracles. The defaults are the exhaustive searches;
/// tests may substitute stubs, which keeps the engine's control flow
/// identical to the argument it executes.
pub trait SubOracles {
    fn find_line(&self, a: &PointSet) -> Result<SearchOutcome<Line>>;
    fn find_restricted_subspace(&self, a: &PointSet, m: u16) -> Result<SearchOutcome<Subspace>>;
    fn gr_search(
        &self,
        cube: Cube,
        lines: &HashSet<Line>,
        m: u16,
    ) -> Result<SearchOutcome<(Subspace, GrBranch)>>;
}

/// Configuration shared by the engine procedures.
pub struct EngineConfig<'a> {
    pub budget: SearchBudget,
    pub table: &'a OracleTable,
    /// Substitute oracles; `None` means exhaustive search under `budget`.
    pub oracles: Option<&'a dyn SubOracles>,
    /// Toy override for the partition dimension GR(k, m).
    pub gr_dim: Option<u16>,
    /// Toy override for the block length M = dhj(k, delta/2) in the
    /// multidimensional lift.
    pub lift_block: Option<u16>,
    /// Toy override for the uniformization dimension M = mdhj(k, m,
    /// delta/2) in the restricted lift.
    pub uniformize_dim: Option<u16>,
}

impl<'a> EngineConfig<'a> {
    pub fn new(table: &'a OracleTable) -> Self {
        EngineConfig {
            budget: SearchBudget::default(),
            table,
            oracles: None,
            gr_dim: None,
            lift_block: None,
            uniformize_dim: None,
        }
    }

    pub(crate) fn line_search(&self, a: &PointSet) -> Result<SearchOutcome<Line>> {
        match self.oracles {
            Some(o) => o.find_line(a),
            None => search::find_line(a, &self.budget),
        }
    }

    pub(crate) fn restricted_subspace_search(
        &self,
        a: &PointSet,
        m: u16,
    ) -> Result<SearchOutcome<Subspace>> {
        match self.oracles {
            Some(o) => o.find_restricted_subspace(a, m),
            None => search::find_restricted_subspace(a, m, &self.budget),
        }
    }

    pub(crate) fn gr_search(
        &self,
        cube: Cube,
        lines: &HashSet<Line>,
        m: u16,
    ) -> Result<SearchOutcome<(Subspace, GrBranch)>> {
        match self.oracles {
            Some(o) => o.gr_search(cube, lines, m),
            None => search::gr_partition_search(cube, lines, m, &self.budget),
        }
    }

    /// True when any dimension override is in play (flags traces as toy).
    pub(crate) fn has_overrides(&self) -> bool {
        self.gr_dim.is_some() || self.lift_block.is_some() || self.uniformize_dim.is_some()
    }
}

/// A failed in-procedure hypothesis: the stage that could not be
/// completed and what was measured there.
#[derive(Clone, Debug)]
pub struct NotMet {
    pub stage: String,
    pub details: String,
}

impl NotMet {
    pub fn new(stage: &str, details: impl Into<String>) -> Self {
        NotMet { stage: stage.to_string(), details: details.into() }
    }
}

pub(crate) fn dens(a: &PointSet) -> Q {
    a.density().into_ratio()
}

/// The subspace `U ⌢ y` (fixed constant suffix on a block subspace).
pub(crate) fn suffix_subspace(u: &Subspace, y: &Word) -> Result<Subspace> {
    Ok(Subspace::new(u.generator().concat_word(y)?))
}

/// The generator of `prefix ⌢ inner ⌢ suffix` where either side may be
/// empty, assembled at the symbol level.
pub(crate) fn sandwich_generator(
    k: u16,
    prefix: &[u16],
    inner: &VariableWord,
    suffix: &[u16],
) -> Result<VariableWord> {
    use crate::cube::Symbol;
    let mut symbols: Vec<Symbol> = prefix.iter().map(|&l| Symbol::Letter(l)).collect();
    symbols.extend_from_slice(inner.symbols());
    symbols.extend(suffix.iter().map(|&l| Symbol::Letter(l)));
    VariableWord::new(k, inner.vars(), symbols)
}
