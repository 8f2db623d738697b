//! Brute-force and branch-and-bound ground truth.
//!
//! Everything here is exhaustive: a `NotFound` means no object of the
//! requested kind exists in the ambient (verified), and every `Found`
//! answer is re-checked point by point before it is returned. Exceeding a
//! budget yields a distinguishable `Exhausted` outcome, never a wrong
//! answer.
//!
//! The maximum line-free search orders points by index and prunes with a
//! greedy cover bound: pairwise free-disjoint lines still fully available
//! each force one exclusion. For `k = 2`, where line-free sets are
//! exactly antichains in the subset order, a greedy chain-cover bound is
//! taken as well and the stronger of the two is used. Coordinate-symmetry
//! isomorph rejection is applied at the root level only: the search is
//! restricted to membership vectors that are lexicographically minimal in
//! their coordinate-permutation orbit, which pins down the fate of the
//! orbit of the second point. Full canonical forms are out of scope; this
//! is a documented performance limitation, not a correctness one.

use crate::cube::{enumerate_lines, enumerate_subspaces, Cube, Line, Subspace};
use crate::error::{Error, Result};
use crate::ratio::{q_ceil, Q};
use crate::set::PointSet;
use num::bigint::BigInt;
use num::{One, Zero};
use std::collections::HashSet;
use std::time::{Duration, Instant};

/// Caps for a search; exceeding one ends the search with `Exhausted`.
#[derive(Clone, Debug)]
pub struct SearchBudget {
    pub max_nodes: u64,
    pub max_time: Option<Duration>,
    /// Worker count for root-level parallel splits. Completed searches
    /// return identical answers for every width.
    pub jobs: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { max_nodes: 50_000_000, max_time: None, jobs: 1 }
    }
}

impl SearchBudget {
    pub fn with_nodes(max_nodes: u64) -> Self {
        SearchBudget { max_nodes, ..Default::default() }
    }
}

/// Outcome of an exhaustive search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome<T> {
    Found(T),
    NotFound,
    Exhausted,
}

impl<T> SearchOutcome<T> {
    pub fn found(self) -> Option<T> {
        match self {
            SearchOutcome::Found(t) => Some(t),
            _ => None,
        }
    }

    pub fn is_not_found(&self) -> bool {
        matches!(self, SearchOutcome::NotFound)
    }
}

/// Independent containment recheck used before any `Found` return.
pub fn line_contained(a: &PointSet, line: &Line) -> Result<bool> {
    a.cube().same_ambient(&line.ambient())?;
    for i in a.cube().alphabet().letters() {
        if !a.contains(&line.point(i)?)? {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn subspace_contained(a: &PointSet, v: &Subspace) -> Result<bool> {
    a.cube().same_ambient(&v.ambient())?;
    for p in v.points_iter() {
        if !a.contains(&p)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// First line of the ambient (in enumeration order) fully contained in
/// `A`; exhaustive `NotFound` otherwise.
pub fn find_line(a: &PointSet, budget: &SearchBudget) -> Result<SearchOutcome<Line>> {
    let cube = a.cube();
    let mut nodes = 0u64;
    let start = Instant::now();
    for line in enumerate_lines(cube.k(), cube.n())? {
        nodes += 1;
        if out_of_budget(nodes, &start, budget) {
            return Ok(SearchOutcome::Exhausted);
        }
        if line.points_iter().all(|p| a.contains_index(p.index())) {
            if !line_contained(a, &line)? {
                return Err(Error::internal("find_line", "containment recheck failed"));
            }
            return Ok(SearchOutcome::Found(line));
        }
    }
    Ok(SearchOutcome::NotFound)
}

/// First `m`-dimensional subspace contained in `A`.
pub fn find_subspace(a: &PointSet, m: u16, budget: &SearchBudget) -> Result<SearchOutcome<Subspace>> {
    if m < 1 {
        return Err(Error::ParameterOutOfRange("dimension must be >= 1".into()));
    }
    let cube = a.cube();
    if m > cube.n() {
        return Ok(SearchOutcome::NotFound);
    }
    let mut nodes = 0u64;
    let start = Instant::now();
    for v in enumerate_subspaces(cube.k(), cube.n(), m)? {
        nodes += 1;
        if out_of_budget(nodes, &start, budget) {
            return Ok(SearchOutcome::Exhausted);
        }
        if v.points_iter().all(|p| a.contains_index(p.index())) {
            if !subspace_contained(a, &v)? {
                return Err(Error::internal("find_subspace", "containment recheck failed"));
            }
            return Ok(SearchOutcome::Found(v));
        }
    }
    Ok(SearchOutcome::NotFound)
}

/// First `m`-dimensional subspace `V` of the ambient `[k+1]^n` whose
/// restriction `V ↾ k` is contained in `A`.
pub fn find_restricted_subspace(
    a: &PointSet,
    m: u16,
    budget: &SearchBudget,
) -> Result<SearchOutcome<Subspace>> {
    let cube = a.cube();
    if cube.k() < 3 {
        return Err(Error::ParameterOutOfRange(
            "restricted subspace search needs an ambient alphabet of size >= 3".into(),
        ));
    }
    if m < 1 {
        return Err(Error::ParameterOutOfRange("dimension must be >= 1".into()));
    }
    if m > cube.n() {
        return Ok(SearchOutcome::NotFound);
    }
    let k_restricted = cube.k() - 1;
    let model = Cube::new(k_restricted, m)?;
    let mut nodes = 0u64;
    let start = Instant::now();
    for v in enumerate_subspaces(cube.k(), cube.n(), m)? {
        nodes += 1;
        if out_of_budget(nodes, &start, budget) {
            return Ok(SearchOutcome::Exhausted);
        }
        let inside = (0..model.point_count()).all(|i| {
            let word = model.word_from_index(i);
            let p = v.generator().instantiate(word.letters()).expect("arity matches");
            a.contains_index(p.index())
        });
        if inside {
            let restricted = v.restrict(k_restricted)?;
            if !restricted.is_subset_of(a)? {
                return Err(Error::internal("find_restricted_subspace", "restriction recheck failed"));
            }
            return Ok(SearchOutcome::Found(v));
        }
    }
    Ok(SearchOutcome::NotFound)
}

/// Which side of the partition property a returned subspace satisfies.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum GrBranch {
    Contained,
    Disjoint,
}

/// First `m`-dimensional subspace `V` with `Lines(V) ⊆ L` or
/// `Lines(V) ∩ L = ∅`, over canonical subspaces of the given ambient.
pub fn gr_partition_search(
    cube: Cube,
    lines: &HashSet<Line>,
    m: u16,
    budget: &SearchBudget,
) -> Result<SearchOutcome<(Subspace, GrBranch)>> {
    for line in lines {
        cube.same_ambient(&line.ambient())?;
    }
    if m < 1 {
        return Err(Error::ParameterOutOfRange("dimension must be >= 1".into()));
    }
    if m > cube.n() {
        return Ok(SearchOutcome::NotFound);
    }
    let mut nodes = 0u64;
    let start = Instant::now();
    for v in enumerate_subspaces(cube.k(), cube.n(), m)? {
        nodes += 1;
        if out_of_budget(nodes, &start, budget) {
            return Ok(SearchOutcome::Exhausted);
        }
        let mut inside = 0usize;
        let mut total = 0usize;
        for line in crate::cube::lines_within(&v)? {
            total += 1;
            if lines.contains(&line) {
                inside += 1;
            }
        }
        if inside == total {
            return Ok(SearchOutcome::Found((v, GrBranch::Contained)));
        }
        if inside == 0 {
            return Ok(SearchOutcome::Found((v, GrBranch::Disjoint)));
        }
    }
    Ok(SearchOutcome::NotFound)
}

fn out_of_budget(nodes: u64, start: &Instant, budget: &SearchBudget) -> bool {
    if nodes > budget.max_nodes {
        return true;
    }
    if let Some(cap) = budget.max_time {
        if nodes % 1024 == 0 && start.elapsed() > cap {
            return true;
        }
    }
    false
}

/// Result of a maximum line-free search.
#[derive(Clone, Debug)]
pub struct MaxLinefree {
    pub size: usize,
    pub witness: PointSet,
    /// False when a budget ran out: `size` is then only a lower bound.
    pub optimal: bool,
    pub nodes: u64,
}

/// The largest multiset layer `{ x : letter counts of x = μ }`. Layers are
/// line-free for every `k` (a line's points all have distinct letter
/// counts), so this is both the search's initial incumbent and, for
/// `k = 2`, already the optimum.
pub fn largest_layer(cube: Cube) -> PointSet {
    let k = cube.k() as usize;
    let n = cube.n() as usize;
    let mut best: Option<(usize, Vec<usize>)> = None;
    let mut counts = vec![0usize; k];
    fn walk(pos: usize, left: usize, counts: &mut Vec<usize>, n: usize, best: &mut Option<(usize, Vec<usize>)>) {
        if pos == counts.len() - 1 {
            counts[pos] = left;
            let size = multinomial(n, counts);
            if best.as_ref().map_or(true, |(s, _)| size > *s) {
                *best = Some((size, counts.clone()));
            }
            return;
        }
        // Descending, so ties prefer small letters and lex-least words.
        for c in (0..=left).rev() {
            counts[pos] = c;
            walk(pos + 1, left - c, counts, n, best);
        }
    }
    walk(0, n, &mut counts, n, &mut best);
    let (_, mu) = best.expect("at least one composition");
    PointSet::from_fn(cube, |w| {
        let mut c = vec![0usize; k];
        for &l in w.letters() {
            c[l as usize - 1] += 1;
        }
        c == mu
    })
}

fn multinomial(n: usize, counts: &[usize]) -> usize {
    let mut result = 1usize;
    let mut seen = 0usize;
    for &c in counts {
        for i in 1..=c {
            seen += 1;
            result = result * seen / i;
        }
    }
    debug_assert_eq!(seen, n);
    result
}

#[derive(Clone)]
struct LinefreeSearch {
    cube: Cube,
    lines: Vec<Vec<u32>>,
    /// 0 = free, 1 = in, 2 = out
    status: Vec<u8>,
    in_count: usize,
    free_count: usize,
    best_size: usize,
    best_witness: Option<Vec<u32>>,
    target: Option<usize>,
    nodes: u64,
    budget_nodes: u64,
    deadline: Option<Instant>,
    exhausted: bool,
    stop: bool,
    /// Points with exactly one letter 2, rest 1: the coordinate orbit of
    /// index 1, used by the root-level symmetry rule.
    orbit_of_second: Vec<u32>,
    use_orbit_rule: bool,
}

impl LinefreeSearch {
    fn new(cube: Cube, budget: &SearchBudget) -> Result<Self> {
        let lines: Vec<Vec<u32>> = enumerate_lines(cube.k(), cube.n())?
            .map(|l| l.points_iter().map(|p| p.index() as u32).collect())
            .collect();
        let total = cube.point_count();
        let mut orbit = Vec::new();
        let n = cube.n() as usize;
        for pos in 0..n {
            let mut letters = vec![1u16; n];
            letters[pos] = 2;
            orbit.push(crate::cube::Word::new(cube.k(), letters)?.index() as u32);
        }
        Ok(LinefreeSearch {
            cube,
            lines,
            status: vec![0; total],
            in_count: 0,
            free_count: total,
            best_size: 0,
            best_witness: None,
            target: None,
            nodes: 0,
            budget_nodes: budget.max_nodes,
            deadline: budget.max_time.map(|d| Instant::now() + d),
            exhausted: false,
            stop: false,
            orbit_of_second: orbit,
            use_orbit_rule: true,
        })
    }

    fn set_status(&mut self, p: u32, s: u8, trail: &mut Vec<(u32, u8)>) {
        let old = self.status[p as usize];
        debug_assert_eq!(old, 0);
        trail.push((p, old));
        self.status[p as usize] = s;
        self.free_count -= 1;
        if s == 1 {
            self.in_count += 1;
        }
    }

    fn undo(&mut self, trail: &[(u32, u8)]) {
        for &(p, old) in trail.iter().rev() {
            let cur = self.status[p as usize];
            if cur == 1 {
                self.in_count -= 1;
            }
            self.free_count += 1;
            self.status[p as usize] = old;
        }
    }

    /// Marks a point as included; applies the root orbit rule. Returns
    /// false on conflict (an orbit point already excluded).
    fn include(&mut self, p: u32, trail: &mut Vec<(u32, u8)>) -> bool {
        if self.status[p as usize] == 1 {
            return true;
        }
        self.set_status(p, 1, trail);
        if self.use_orbit_rule && p == 1 {
            // Lex-minimal orbit representatives that contain the second
            // point contain its whole coordinate orbit.
            for q in self.orbit_of_second.clone() {
                match self.status[q as usize] {
                    0 => self.set_status(q, 1, trail),
                    1 => {}
                    _ => return false,
                }
            }
        }
        true
    }

    /// First line in enumeration order with no excluded point and at least
    /// one free point; `Err(())`-like `None` double duty is avoided by the
    /// violated flag: a fully included line kills the branch.
    fn first_forcible_line(&self) -> std::result::Result<Option<usize>, ()> {
        'line: for (li, pts) in self.lines.iter().enumerate() {
            let mut free = 0;
            for &p in pts {
                match self.status[p as usize] {
                    2 => continue 'line,
                    0 => free += 1,
                    _ => {}
                }
            }
            if free == 0 {
                return Err(()); // all points included: line violated
            }
            return Ok(Some(li));
        }
        Ok(None)
    }

    /// Upper bound on the size of any completion of the current state.
    fn upper_bound(&self) -> usize {
        let mut bound = self.in_count + self.free_count;
        // Greedy free-disjoint cover: each alive line (no excluded point,
        // >= 1 free point) whose free points are disjoint from previously
        // taken lines forces one exclusion.
        let mut used = vec![false; self.status.len()];
        let mut cover = 0usize;
        'line: for pts in &self.lines {
            let mut any_free = false;
            for &p in pts {
                match self.status[p as usize] {
                    2 => continue 'line,
                    0 => {
                        if used[p as usize] {
                            continue 'line;
                        }
                        any_free = true;
                    }
                    _ => {}
                }
            }
            if !any_free {
                continue;
            }
            for &p in pts {
                if self.status[p as usize] == 0 {
                    used[p as usize] = true;
                }
            }
            cover += 1;
        }
        bound -= cover;
        if self.cube.k() == 2 {
            bound = bound.min(self.in_count + self.chain_cover_bound());
        }
        bound
    }

    /// For k = 2 only: line-free sets are antichains of the subset order,
    /// so a chain cover of the free points bounds additions by the number
    /// of chains.
    fn chain_cover_bound(&self) -> usize {
        let n = self.cube.n() as usize;
        let total = self.status.len();
        let mut covered = vec![false; total];
        let mut chains = 0usize;
        let dominates = |hi: usize, lo: usize| -> bool {
            // Digits are letter - 1, so for k = 2 the product order is
            // bitwise domination of the index digits.
            let (mut hi, mut lo) = (hi, lo);
            for _ in 0..n {
                if hi % 2 < lo % 2 {
                    return false;
                }
                hi /= 2;
                lo /= 2;
            }
            true
        };
        for start in 0..total {
            if self.status[start] != 0 || covered[start] {
                continue;
            }
            chains += 1;
            covered[start] = true;
            let mut cur = start;
            'extend: loop {
                for next in cur + 1..total {
                    if self.status[next] == 0 && !covered[next] && dominates(next, cur) {
                        covered[next] = true;
                        cur = next;
                        continue 'extend;
                    }
                }
                break;
            }
        }
        chains
    }

    fn tick(&mut self) -> bool {
        self.nodes += 1;
        if self.nodes > self.budget_nodes {
            self.exhausted = true;
            return false;
        }
        if let Some(deadline) = self.deadline {
            if self.nodes % 1024 == 0 && Instant::now() > deadline {
                self.exhausted = true;
                return false;
            }
        }
        true
    }

    fn record_candidate(&mut self) {
        let size = self.in_count + self.free_count;
        if size > self.best_size {
            self.best_size = size;
            let witness: Vec<u32> = (0..self.status.len() as u32)
                .filter(|&p| self.status[p as usize] != 2)
                .collect();
            self.best_witness = Some(witness);
            if let Some(t) = self.target {
                if size >= t {
                    self.stop = true;
                }
            }
        }
    }

    fn search(&mut self) {
        if self.stop || self.exhausted || !self.tick() {
            return;
        }
        let line = match self.first_forcible_line() {
            Err(()) => return, // a line is fully included: dead branch
            Ok(None) => {
                self.record_candidate();
                return;
            }
            Ok(Some(li)) => li,
        };
        if self.upper_bound() <= self.best_size {
            return;
        }
        let pts = self.lines[line].clone();
        let free_pts: Vec<u32> =
            pts.iter().copied().filter(|&p| self.status[p as usize] == 0).collect();
        // Branch on the least excluded free point of the line: branch t
        // excludes free_pts[t] and includes the earlier ones.
        for t in 0..free_pts.len() {
            let mut trail = Vec::new();
            let mut feasible = true;
            for &p in &free_pts[..t] {
                if !self.include(p, &mut trail) {
                    feasible = false;
                    break;
                }
            }
            if feasible {
                // Orbit forcing may have included the branch point already,
                // in which case "least excluded here" is an empty case.
                if self.status[free_pts[t] as usize] == 0 {
                    self.set_status(free_pts[t], 2, &mut trail);
                    self.search();
                }
            }
            self.undo(&trail);
            if self.stop || self.exhausted {
                return;
            }
            if !feasible {
                // Later branches include this prefix too.
                return;
            }
        }
    }
}

/// Exact maximum line-free subset of `[k]^n` with a deterministic witness.
///
/// Under `jobs > 1` the root branches are explored independently in
/// parallel and merged by (size, root branch index), which returns the
/// same answer and witness as the single-worker run.
pub fn max_linefree(k: u16, n: u16, budget: &SearchBudget) -> Result<MaxLinefree> {
    let cube = Cube::new(k, n)?;
    let layer = largest_layer(cube);
    let incumbent = layer.cardinality();
    let mut root = LinefreeSearch::new(cube, budget)?;
    root.best_size = incumbent;
    let (best, nodes, exhausted) = if budget.jobs > 1 {
        parallel_root_split(root, budget.jobs)
    } else {
        root.search();
        (root.best_witness.take().map(|w| (root.best_size, w)), root.nodes, root.exhausted)
    };
    let (size, witness) = match best {
        Some((size, points)) => {
            let set = PointSet::from_indices(cube, points.into_iter().map(|p| p as usize));
            debug_assert_eq!(set.cardinality(), size);
            (size, set)
        }
        None => (incumbent, layer),
    };
    if find_line(&witness, &SearchBudget::default())?.found().is_some() {
        return Err(Error::internal("max_linefree", "witness contains a line"));
    }
    Ok(MaxLinefree { size, witness, optimal: !exhausted, nodes })
}

type BranchBest = Option<(usize, Vec<u32>)>;

/// Runs each root branch to completion on its own worker with only the
/// layer incumbent as the initial bound (no shared state), then merges
/// deterministically: maximum size, ties to the least branch index.
fn parallel_root_split(root: LinefreeSearch, jobs: usize) -> (BranchBest, u64, bool) {
    let line = match root.first_forcible_line() {
        Ok(Some(li)) => li,
        // No branching to do: finish sequentially.
        _ => {
            let mut root = root;
            root.search();
            let best = root.best_witness.take().map(|w| (root.best_size, w));
            return (best, root.nodes, root.exhausted);
        }
    };
    let free_pts: Vec<u32> = root.lines[line]
        .iter()
        .copied()
        .filter(|&p| root.status[p as usize] == 0)
        .collect();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build().expect("thread pool");
    let results: Vec<(BranchBest, u64, bool)> = pool.install(|| {
        use rayon::prelude::*;
        (0..free_pts.len())
            .into_par_iter()
            .map(|t| {
                let mut branch = root.clone();
                let mut trail = Vec::new();
                let mut feasible = true;
                for &p in &free_pts[..t] {
                    if !branch.include(p, &mut trail) {
                        feasible = false;
                        break;
                    }
                }
                if feasible && branch.status[free_pts[t] as usize] == 0 {
                    branch.set_status(free_pts[t], 2, &mut trail);
                    branch.search();
                }
                (branch.best_witness.take().map(|w| (branch.best_size, w)), branch.nodes, branch.exhausted)
            })
            .collect()
    });
    let mut merged: BranchBest = None;
    let mut nodes = 1u64;
    let mut exhausted = false;
    for (best, branch_nodes, branch_exhausted) in results {
        nodes += branch_nodes;
        exhausted |= branch_exhausted;
        if let Some((size, witness)) = best {
            let better = match &merged {
                None => true,
                Some((cur, _)) => size > *cur,
            };
            if better {
                merged = Some((size, witness));
            }
        }
    }
    (merged, nodes, exhausted)
}

/// Decides whether a line-free subset of size at least `target` exists;
/// returns a witness when one does. Runs sequentially with early exit.
pub fn exists_linefree(
    k: u16,
    n: u16,
    target: usize,
    budget: &SearchBudget,
) -> Result<SearchOutcome<PointSet>> {
    let cube = Cube::new(k, n)?;
    if target == 0 {
        return Ok(SearchOutcome::Found(PointSet::empty(cube)));
    }
    if target > cube.point_count() {
        return Ok(SearchOutcome::NotFound);
    }
    let layer = largest_layer(cube);
    if layer.cardinality() >= target {
        return Ok(SearchOutcome::Found(layer));
    }
    let mut search = LinefreeSearch::new(cube, budget)?;
    search.best_size = target - 1;
    search.target = Some(target);
    search.search();
    if let Some(points) = search.best_witness.take() {
        let set = PointSet::from_indices(cube, points.into_iter().map(|p| p as usize));
        if find_line(&set, &SearchBudget::default())?.found().is_some() {
            return Err(Error::internal("exists_linefree", "witness contains a line"));
        }
        return Ok(SearchOutcome::Found(set));
    }
    if search.exhausted {
        return Ok(SearchOutcome::Exhausted);
    }
    Ok(SearchOutcome::NotFound)
}

/// The certified value of a horizon-bounded threshold search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HorizonValue {
    /// Least `N` such that every `n` in `[N, horizon]` admits no line-free
    /// set of the requested density (each verified exhaustively).
    Determined(u16),
    /// A counterexample exists at the horizon itself.
    Undetermined,
}

/// Horizon-verified threshold result. The label is deliberate: values are
/// certified only up to `horizon`, never proven beyond it.
#[derive(Clone, Debug)]
pub struct HorizonResult {
    pub value: HorizonValue,
    pub horizon: u16,
    /// Counterexample line-free sets of density >= delta, per n where one
    /// exists.
    pub witnesses: Vec<(u16, PointSet)>,
}

/// Least `N <= horizon` such that for every `n` in `[N, horizon]` no
/// line-free subset of `[k]^n` has density at least `delta`, with
/// counterexample witnesses below `N`. "Density delta" reads as
/// `|A| >= delta * k^n`, decided by exact rational ceiling.
pub fn dhj_value(
    k: u16,
    delta: &Q,
    horizon: u16,
    budget: &SearchBudget,
) -> Result<SearchOutcome<HorizonResult>> {
    if *delta <= Q::zero() || *delta > Q::one() {
        return Err(Error::ParameterOutOfRange("delta must satisfy 0 < delta <= 1".into()));
    }
    if horizon < 1 {
        return Err(Error::ParameterOutOfRange("horizon must be >= 1".into()));
    }
    let mut witnesses = Vec::new();
    let mut last_counterexample: Option<u16> = None;
    for n in 1..=horizon {
        let points = Q::from_integer(BigInt::from(Cube::new(k, n)?.point_count()));
        let target = q_ceil(&(delta.clone() * points));
        let target: usize = target.try_into().map_err(|_| {
            Error::ParameterOutOfRange("density target exceeds the ambient size".into())
        })?;
        match exists_linefree(k, n, target, budget)? {
            SearchOutcome::Found(witness) => {
                last_counterexample = Some(n);
                witnesses.push((n, witness));
            }
            SearchOutcome::NotFound => {}
            SearchOutcome::Exhausted => return Ok(SearchOutcome::Exhausted),
        }
    }
    let value = match last_counterexample {
        Some(n) if n == horizon => HorizonValue::Undetermined,
        Some(n) => HorizonValue::Determined(n + 1),
        None => HorizonValue::Determined(1),
    };
    Ok(SearchOutcome::Found(HorizonResult { value, horizon, witnesses }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube::{VariableWord, Word};
    use crate::ratio::q;

    fn set_of(k: u16, n: u16, words: &[&str]) -> PointSet {
        let cube = Cube::new(k, n).unwrap();
        let words: Vec<Word> = words.iter().map(|s| Word::parse(k, s).unwrap()).collect();
        PointSet::from_words(cube, &words).unwrap()
    }

    #[test]
    fn find_line_examples() {
        let budget = SearchBudget::default();
        let full = PointSet::full(Cube::new(2, 1).unwrap());
        let line = find_line(&full, &budget).unwrap().found().unwrap();
        assert_eq!(line.to_string(), "a");

        let antichain = set_of(2, 2, &["12", "21"]);
        assert!(find_line(&antichain, &budget).unwrap().is_not_found());

        let a = set_of(2, 2, &["11", "12", "21"]);
        let line = find_line(&a, &budget).unwrap().found().unwrap();
        assert_eq!(line.to_string(), "1a");
    }

    #[test]
    fn find_line_budget_exhaustion_is_distinguishable() {
        let a = set_of(2, 2, &["12", "21"]);
        let outcome = find_line(&a, &SearchBudget::with_nodes(2)).unwrap();
        assert_eq!(outcome, SearchOutcome::Exhausted);
    }

    #[test]
    fn find_subspace_examples() {
        let budget = SearchBudget::default();
        let full = PointSet::full(Cube::new(2, 3).unwrap());
        let v = find_subspace(&full, 2, &budget).unwrap().found().unwrap();
        assert!(subspace_contained(&full, &v).unwrap());

        let antichain = set_of(2, 2, &["12", "21"]);
        assert!(find_subspace(&antichain, 1, &budget).unwrap().is_not_found());

        // m = n: only the identity subspace qualifies, so found iff full.
        let full2 = PointSet::full(Cube::new(2, 2).unwrap());
        let id = find_subspace(&full2, 2, &budget).unwrap().found().unwrap();
        assert_eq!(id, Subspace::identity(2, 2).unwrap());
        let almost = full2.difference(&set_of(2, 2, &["22"])).unwrap();
        assert!(find_subspace(&almost, 2, &budget).unwrap().is_not_found());
    }

    #[test]
    fn find_restricted_subspace_examples() {
        let budget = SearchBudget::default();
        let a = set_of(3, 1, &["1", "2"]);
        let v = find_restricted_subspace(&a, 1, &budget).unwrap().found().unwrap();
        assert_eq!(v.to_string(), "a");

        // The lexicographic-first valid line for [3]^2 minus {33}: "1a"
        // already has restriction {11, 12} inside A, and precedes "aa".
        let b = PointSet::full(Cube::new(3, 2).unwrap()).difference(&set_of(3, 2, &["33"])).unwrap();
        let v = find_restricted_subspace(&b, 1, &budget).unwrap().found().unwrap();
        assert_eq!(v.to_string(), "1a");
        let diag = Subspace::new(VariableWord::parse(3, "aa").unwrap());
        assert!(diag.restrict(2).unwrap().is_subset_of(&b).unwrap());

        let empty = PointSet::empty(Cube::new(3, 2).unwrap());
        assert!(find_restricted_subspace(&empty, 1, &budget).unwrap().is_not_found());

        let two = PointSet::full(Cube::new(2, 2).unwrap());
        assert!(find_restricted_subspace(&two, 1, &budget).is_err());
    }

    #[test]
    fn gr_search_examples() {
        let budget = SearchBudget::default();
        let cube = Cube::new(2, 2).unwrap();
        // m = 1: Lines(V) = {V}, so the first line decides its own branch.
        let empty = HashSet::new();
        let (v, branch) = gr_partition_search(cube, &empty, 1, &budget).unwrap().found().unwrap();
        assert_eq!(branch, GrBranch::Disjoint);
        assert_eq!(v.to_string(), "1a");

        let mut lines = HashSet::new();
        lines.insert(Line::new(VariableWord::parse(2, "1a").unwrap()).unwrap());
        let (v, branch) = gr_partition_search(cube, &lines, 1, &budget).unwrap().found().unwrap();
        assert_eq!(branch, GrBranch::Contained);
        assert_eq!(v.to_string(), "1a");

        let (v, branch) = gr_partition_search(cube, &empty, 2, &budget).unwrap().found().unwrap();
        assert_eq!(branch, GrBranch::Disjoint);
        assert_eq!(v, Subspace::identity(2, 2).unwrap());
    }

    #[test]
    fn largest_layer_matches_central_binomial() {
        let layer = largest_layer(Cube::new(2, 4).unwrap());
        assert_eq!(layer.cardinality(), 6);
        let layer = largest_layer(Cube::new(2, 2).unwrap());
        let words: Vec<String> = layer.iter_words().map(|w| w.to_string()).collect();
        assert_eq!(words, vec!["12", "21"]);
        // For n = 1 the tie-break prefers small letters: the layer is {1}.
        let layer = largest_layer(Cube::new(2, 1).unwrap());
        let words: Vec<String> = layer.iter_words().map(|w| w.to_string()).collect();
        assert_eq!(words, vec!["1"]);
        // Multiset layers are always line-free, for every k.
        let layer = largest_layer(Cube::new(3, 3).unwrap());
        assert!(find_line(&layer, &SearchBudget::default()).unwrap().is_not_found());
    }

    #[test]
    fn max_linefree_small_values() {
        let budget = SearchBudget::default();
        let r = max_linefree(2, 2, &budget).unwrap();
        assert_eq!(r.size, 2);
        assert!(r.optimal);
        let words: Vec<String> = r.witness.iter_words().map(|w| w.to_string()).collect();
        assert_eq!(words, vec!["12", "21"]);

        assert_eq!(max_linefree(2, 4, &budget).unwrap().size, 6);
        assert_eq!(max_linefree(3, 1, &budget).unwrap().size, 2);
        let r = max_linefree(3, 2, &budget).unwrap();
        assert_eq!(r.size, 6);
        assert!(find_line(&r.witness, &budget).unwrap().is_not_found());
    }

    #[test]
    fn dhj_value_examples() {
        let budget = SearchBudget::default();
        let r = dhj_value(2, &q(1, 2), 6, &budget).unwrap().found().unwrap();
        assert_eq!(r.value, HorizonValue::Determined(3));
        let ns: Vec<u16> = r.witnesses.iter().map(|(n, _)| *n).collect();
        assert_eq!(ns, vec![1, 2]);
        assert_eq!(r.witnesses[0].1.cardinality(), 1);

        let r = dhj_value(2, &q(1, 1), 6, &budget).unwrap().found().unwrap();
        assert_eq!(r.value, HorizonValue::Determined(1));
        assert!(r.witnesses.is_empty());

        let r = dhj_value(2, &q(1, 4), 6, &budget).unwrap().found().unwrap();
        assert_eq!(r.value, HorizonValue::Undetermined);
        assert_eq!(r.witnesses.last().unwrap().0, 6);
    }
}
