//! Exhaustive engines: per-configuration backtracking for the dimension-4
//! base case, and the loose-Hamilton-path nonexistence checks for
//! dimensions 2 and 3.
//!
//! The engine works on dense base-3 vertex indices with `u128` bitmaps, so
//! it is limited to `3^d <= 128`, i.e. `d <= 4` - exactly the desk-scale
//! instances the base case needs. Every found path is re-verified through
//! the independent certificate checker before it is reported.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::fmt;
use core::time::Duration;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::{ConfigError, Configuration};
use crate::cube::{CubeError, TritVector};
use crate::paths::{
    endpoint_variants, reverse, variant_path, verify, CertificateData, LoosePath, VerifyError,
};
use crate::symmetry::{normalize, SymmetryError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchError {
    Cube(CubeError),
    Config(ConfigError),
    Symmetry(SymmetryError),
    /// The bitmap engine handles at most `3^d <= 128` vertices.
    DimTooLargeForSearch(usize),
    /// Nonexistence checks cover dimensions 2 and 3 only.
    DimOutOfScope(usize),
    /// A path produced by the engine failed re-verification.
    EngineUnsound(VerifyError),
}

impl fmt::Display for SearchError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SearchError::Cube(e) => write!(f, "{e}"),
            SearchError::Config(e) => write!(f, "{e}"),
            SearchError::Symmetry(e) => write!(f, "{e}"),
            SearchError::DimTooLargeForSearch(d) => {
                write!(f, "exhaustive search supports 3^d <= 128 vertices, got d={d}")
            }
            SearchError::DimOutOfScope(d) => {
                write!(f, "nonexistence check covers d in {{2,3}}, got d={d}")
            }
            SearchError::EngineUnsound(e) => {
                write!(f, "internal error: engine emitted an invalid path: {e}")
            }
        }
    }
}

impl core::error::Error for SearchError {}

impl From<CubeError> for SearchError {
    fn from(e: CubeError) -> Self {
        SearchError::Cube(e)
    }
}

impl From<ConfigError> for SearchError {
    fn from(e: ConfigError) -> Self {
        SearchError::Config(e)
    }
}

impl From<SymmetryError> for SearchError {
    fn from(e: SymmetryError) -> Self {
        SearchError::Symmetry(e)
    }
}

/// Limits for one configuration's search. The node limit applies to each
/// seeded attempt; the final exhaustive pass is unbounded and can only be
/// interrupted through the caller's stop callback (which is how the time
/// limit is enforced by the hosting process).
#[derive(Debug, Clone)]
pub struct SearchBudget {
    pub per_config_node_limit: u64,
    /// Informational wall-clock limit; enforced by the host through the
    /// stop callback, since this crate has no clock.
    pub per_config_time_limit: Duration,
    /// Ordering seeds for the budgeted attempts, tried in order.
    pub restart_seeds: Vec<u64>,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            per_config_node_limit: 400_000,
            per_config_time_limit: Duration::ZERO, // zero = no wall-clock limit
            restart_seeds: alloc::vec![1],
        }
    }
}

impl SearchBudget {
    /// Budget whose attempts derive from one global ordering seed.
    pub fn seeded(seed: u64, per_config_node_limit: u64) -> Self {
        SearchBudget {
            per_config_node_limit,
            per_config_time_limit: Duration::ZERO,
            restart_seeds: alloc::vec![seed.wrapping_mul(2).wrapping_add(1)],
        }
    }
}

/// Soundness-preserving prunes; disabling them only slows the search down.
/// Exposed so the pruned and unpruned engines can be cross-checked.
#[derive(Debug, Clone, Copy)]
pub struct SearchFlags {
    /// Cut branches whose unused vertices cannot all lie in one reachable
    /// region (with a one-vertex allowance for the next edge's middle).
    pub connectivity: bool,
    /// Cut branches whose unused vertices cannot be partitioned into
    /// same-edge pairs (trit-class balance of the remaining set).
    pub matching: bool,
    /// Force the next edge through vertices only coverable via the tail.
    pub tail_dependence: bool,
}

impl Default for SearchFlags {
    fn default() -> Self {
        SearchFlags { connectivity: true, matching: true, tail_dependence: true }
    }
}

/// Result of a per-configuration search.
#[derive(Debug, Clone)]
pub enum SearchOutcome {
    /// A verified covering path.
    Covered(CertificateData),
    /// The full tree was explored; no covering path exists.
    ProvenUncovered { nodes: u64 },
    /// Budget or stop callback fired before exhaustion; no verdict.
    Inconclusive { nodes: u64 },
}

// dense-index model of Q(d) for the bitmap engine
struct Engine {
    d: usize,
    n: usize,
    // partners[v][c] = the two vertices completing v's lifting edge at
    // coordinate c
    partners: Vec<[[u8; 2]; 4]>,
    // vertices by trit-sum mod 3; every edge holds one vertex of each class
    class_mask: [u128; 3],
    flags: SearchFlags,
    // move-ordering strategy, see order_key
    ordering: u8,
}

struct Query {
    start: u8,
    /// Required final vertex; `None` accepts any endpoint.
    end: Option<u8>,
    /// Bitmap of omitted vertices.
    blocked: u128,
    /// Number of vertices the path must cover.
    target: u32,
}

enum Walk {
    Found(Vec<u8>),
    Exhausted,
    Stopped,
}

enum StepResult {
    Found,
    Exhausted,
    Stopped,
}

impl Engine {
    fn new(d: usize, flags: SearchFlags) -> Result<Engine, SearchError> {
        let n = 3usize.checked_pow(d as u32).unwrap_or(usize::MAX);
        if d == 0 || d > 4 || n > 128 {
            return Err(SearchError::DimTooLargeForSearch(d));
        }
        let mut pow = [0usize; 4];
        for (c, p) in pow.iter_mut().enumerate().take(d) {
            *p = 3usize.pow((d - 1 - c) as u32);
        }
        let mut partners = alloc::vec![[[0u8; 2]; 4]; n];
        let mut class_mask = [0u128; 3];
        for (v, row) in partners.iter_mut().enumerate() {
            let mut sum = 0usize;
            for c in 0..d {
                let t = (v / pow[c]) % 3;
                sum += t;
                let mut k = 0;
                for other in 0..3usize {
                    if other != t {
                        let idx = v as isize + (other as isize - t as isize) * pow[c] as isize;
                        row[c][k] = idx as u8;
                        k += 1;
                    }
                }
            }
            class_mask[sum % 3] |= 1u128 << v;
        }
        Ok(Engine { d, n, partners, class_mask, flags, ordering: 0 })
    }

    // Soundness of the prunes, relied on below.
    //
    // Facts about any continuation of a partial loose path with tail t,
    // required end b (when fixed) and unused-vertex set U:
    //
    // (F1) every future edge consists of its then-tail plus two vertices of
    //      U, and the then-tail is either t (next edge only) or itself in
    //      U. So an edge containing a used vertex other than t can never be
    //      chosen again, and b can never serve as a then-tail because the
    //      path ends there.
    // (F2) edges after the next one lie entirely inside U. Once the next
    //      edge {t, m, e} is chosen, the continuation from e stays inside
    //      the component of e in the hypergraph induced on U; the only
    //      vertex coverable outside that component is m. Hence some
    //      component of U must have size >= |U| - 1, and if it misses one
    //      vertex, that vertex must be covered by the next edge
    //      ("connectivity").
    // (F3) the future edges cover U by disjoint pairs {mid, end}, and the
    //      three values of an edge's free coordinate give its vertices
    //      pairwise distinct trit sums mod 3, so a pair never joins two
    //      vertices of the same class: no class may exceed the other two
    //      combined within U ("matching" / parity of the remaining set).
    // (F4) if every edge that could cover some vertex of U contains t, the
    //      vertex must be covered by the immediately next edge (F1). One
    //      edge covers two vertices, so three or more such vertices are a
    //      dead end, and one or two constrain the next edge
    //      ("tail_dependence").
    //
    // All four only remove branches that cannot complete, so pruned and
    // unpruned searches return identical verdicts (cross-checked at
    // dimension 2 in the tests).

    // connectivity (F2): None = dead, else the forced-vertex bitmap
    fn component_forced(&self, avail: u128) -> Option<u128> {
        if !self.flags.connectivity || avail == 0 {
            return Some(0);
        }
        let total = avail.count_ones();
        let mut stack = [0u8; 128];
        let mut unvisited = avail;
        let mut best: u32 = 0;
        let mut best_mask: u128 = 0;
        while unvisited != 0 {
            let root = unvisited.trailing_zeros() as u8;
            let mut comp: u128 = 1u128 << root;
            unvisited &= !(1u128 << root);
            let mut top = 0usize;
            stack[top] = root;
            top += 1;
            while top > 0 {
                top -= 1;
                let z = stack[top];
                for c in 0..self.d {
                    let [p, q] = self.partners[z as usize][c];
                    let pb = 1u128 << p;
                    let qb = 1u128 << q;
                    if avail & pb != 0 && avail & qb != 0 {
                        if comp & pb == 0 {
                            comp |= pb;
                            unvisited &= !pb;
                            stack[top] = p;
                            top += 1;
                        }
                        if comp & qb == 0 {
                            comp |= qb;
                            unvisited &= !qb;
                            stack[top] = q;
                            top += 1;
                        }
                    }
                }
            }
            let size = comp.count_ones();
            if size > best {
                best = size;
                best_mask = comp;
            }
        }
        match total - best {
            0 => Some(0),
            1 => Some(avail & !best_mask),
            _ => None,
        }
    }

    // class parity (F3): every future edge covers two unused vertices with
    // distinct trit sums mod 3 (the free coordinate takes all three
    // values), so the unused set must keep its classes matchable
    fn classes_balanced(&self, avail: u128) -> bool {
        if !self.flags.matching {
            return true;
        }
        let c0 = (avail & self.class_mask[0]).count_ones();
        let c1 = (avail & self.class_mask[1]).count_ones();
        let c2 = (avail & self.class_mask[2]).count_ones();
        let max = c0.max(c1).max(c2);
        max <= c0 + c1 + c2 - max
    }

    // tail dependence (F4): bitmap of vertices forced into the next edge;
    // None when some vertex has no covering edge at all
    fn tail_dependent(&self, avail: u128, tail: u8, end: Option<u8>) -> Option<u128> {
        if !self.flags.tail_dependence {
            return Some(0);
        }
        // a then-tail may be any unused vertex except b, or the tail itself
        let third_ok = match end {
            Some(b) => (avail & !(1u128 << b)) | (1u128 << tail),
            None => avail | (1u128 << tail),
        };
        let mut dependent: u128 = 0;
        let mut rest = avail;
        while rest != 0 {
            let v = rest.trailing_zeros() as u8;
            rest &= rest - 1;
            let mut any = false;
            let mut all_via_tail = true;
            for c in 0..self.d {
                let [p, q] = self.partners[v as usize][c];
                let pb = 1u128 << p;
                let qb = 1u128 << q;
                // edge {v,p,q} can cover v if one of p,q is a legal
                // then-tail and the other is unused
                let ok = (third_ok & pb != 0 && avail & qb != 0)
                    || (third_ok & qb != 0 && avail & pb != 0);
                if ok {
                    any = true;
                    if p != tail && q != tail {
                        all_via_tail = false;
                        break;
                    }
                }
            }
            if !any {
                return None;
            }
            if all_via_tail {
                dependent |= 1u128 << v;
            }
        }
        Some(dependent)
    }

    fn walk(
        &self,
        q: &Query,
        node_limit: Option<u64>,
        tie: &[u8; 8],
        syms: &[Vec<u8>],
        nodes: &mut u64,
        stop: &mut dyn FnMut() -> bool,
    ) -> Walk {
        let mut used: u128 = (1u128 << q.start) | q.blocked;
        let mut seq = Vec::with_capacity(q.target as usize);
        seq.push(q.start);
        if q.target == 1 {
            return match q.end {
                None => Walk::Found(seq),
                Some(e) if e == q.start => Walk::Found(seq),
                _ => Walk::Exhausted,
            };
        }
        let mut cx = Ctx { node_limit, tie, nodes, stop, stats: None, syms };
        let alive: Vec<u16> = (0..syms.len().min(MAX_SYMS) as u16).collect();
        match self.step(q, &mut used, &mut seq, 1, &alive, &mut cx) {
            StepResult::Found => Walk::Found(seq),
            StepResult::Exhausted => Walk::Exhausted,
            StepResult::Stopped => Walk::Stopped,
        }
    }

    fn step(
        &self,
        q: &Query,
        used: &mut u128,
        seq: &mut Vec<u8>,
        covered: u32,
        alive: &[u16],
        cx: &mut Ctx<'_>,
    ) -> StepResult {
        *cx.nodes += 1;
        if let Some(limit) = cx.node_limit {
            if *cx.nodes > limit {
                return StepResult::Stopped;
            }
        }
        if *cx.nodes % 8192 == 0 && (cx.stop)() {
            return StepResult::Stopped;
        }
        let tail = *seq.last().unwrap();
        let all = (1u128 << self.n).wrapping_sub(1);
        let avail = !*used & all;
        if let Some(st) = cx.stats.as_deref_mut() {
            st.by_depth[avail.count_ones() as usize] += 1;
        }
        self.step_inner(q, used, seq, covered, avail, tail, alive, cx)
    }

    #[allow(clippy::too_many_arguments)]
    fn step_inner(
        &self,
        q: &Query,
        used: &mut u128,
        seq: &mut Vec<u8>,
        covered: u32,
        avail: u128,
        tail: u8,
        alive: &[u16],
        cx: &mut Ctx<'_>,
    ) -> StepResult {
        let forced = match self.tail_dependent(avail, tail, q.end) {
            Some(f) => f,
            None => {
                if let Some(st) = cx.stats.as_deref_mut() {
                    st.dep_prunes += 1;
                }
                return StepResult::Exhausted;
            }
        };
        let forced = match self.component_forced(avail) {
            Some(f) => forced | f,
            None => {
                if let Some(st) = cx.stats.as_deref_mut() {
                    st.comp_prunes += 1;
                }
                return StepResult::Exhausted;
            }
        };
        if forced.count_ones() > 2 {
            if let Some(st) = cx.stats.as_deref_mut() {
                st.dep_prunes += 1;
            }
            return StepResult::Exhausted;
        }
        if !self.classes_balanced(avail) {
            if let Some(st) = cx.stats.as_deref_mut() {
                st.match_prunes += 1;
            }
            return StepResult::Exhausted;
        }
        let finishing = covered + 2 == q.target;
        // candidate next edges, fewest onward extensions first
        let mut moves: [(u8, u8, u8, u8); 8] = [(0, 0, 0, 0); 8];
        let mut m = 0usize;
        for c in 0..self.d {
            let [p, qq] = self.partners[tail as usize][c];
            let pb = 1u128 << p;
            let qb = 1u128 << qq;
            if avail & pb == 0 || avail & qb == 0 {
                continue;
            }
            if forced & !(pb | qb) != 0 {
                continue;
            }
            for (idx, (mid, end)) in [(2 * c, (p, qq)), (2 * c + 1, (qq, p))] {
                if let Some(b) = q.end {
                    // b must stay the path's final vertex: never a middle,
                    // and an end only on the finishing edge
                    if mid == b {
                        continue;
                    }
                    if (end == b) != finishing {
                        continue;
                    }
                }
                let next_avail = avail & !(pb | qb);
                let mut deg = 0u8;
                for c2 in 0..self.d {
                    let [r, s] = self.partners[end as usize][c2];
                    if next_avail & (1u128 << r) != 0 && next_avail & (1u128 << s) != 0 {
                        deg += 1;
                    }
                }
                let key = match self.ordering {
                    1 => 4 - deg, // most onward extensions first
                    2 => {
                        // fewest live lines of the middle vertex first
                        let mut live = 0u8;
                        for c2 in 0..self.d {
                            let [r, ss] = self.partners[mid as usize][c2];
                            if next_avail & (1u128 << r) != 0 && next_avail & (1u128 << ss) != 0 {
                                live += 1;
                            }
                        }
                        live
                    }
                    3 => (mid ^ end).wrapping_mul(31) ^ (*cx.nodes as u8), // scramble
                    _ => deg, // fewest onward extensions first
                };
                moves[m] = (key, cx.tie[idx], mid, end);
                m += 1;
            }
        }
        moves[..m].sort_unstable();
        for &(_, _, mid, end) in &moves[..m] {
            // orbit pruning: a stabiliser element maps this move to an
            // equivalent one; only the lexicographically least per orbit is
            // explored (a strictly smaller image means some smaller
            // representative subsumes this branch)
            if !alive.is_empty() {
                let dominated = alive.iter().any(|&si| {
                    let sym = &cx.syms[si as usize];
                    (sym[mid as usize], sym[end as usize]) < (mid, end)
                });
                if dominated {
                    continue;
                }
            }
            let bits = (1u128 << mid) | (1u128 << end);
            *used |= bits;
            seq.push(mid);
            seq.push(end);
            if finishing {
                return StepResult::Found;
            }
            let mut child_alive = [0u16; MAX_SYMS];
            let mut child_len = 0usize;
            for &si in alive {
                let sym = &cx.syms[si as usize];
                if sym[mid as usize] == mid && sym[end as usize] == end {
                    child_alive[child_len] = si;
                    child_len += 1;
                }
            }
            match self.step(q, used, seq, covered + 2, &child_alive[..child_len], cx) {
                StepResult::Exhausted => {}
                other => return other,
            }
            seq.pop();
            seq.pop();
            *used &= !bits;
        }
        StepResult::Exhausted
    }
}

// bundled mutable search context
struct Ctx<'a> {
    node_limit: Option<u64>,
    tie: &'a [u8; 8],
    nodes: &'a mut u64,
    stop: &'a mut dyn FnMut() -> bool,
    stats: Option<&'a mut ProfileStats>,
    // vertex permutations fixing the query, for orbit pruning; alive holds
    // the indices still fixing the current state
    syms: &'a [Vec<u8>],
}

// orbit pruning keeps at most this many stabiliser elements; using a
// subset of the group is still sound (every orbit minimum survives)
const MAX_SYMS: usize = 64;

// All non-identity vertex permutations induced by symmetries that fix the
// covering query: a and b pointwise and the omitted pair setwise. Subtree
// outcomes are invariant under these, which justifies the orbit pruning.
fn query_stabilizer(c: &Configuration) -> Vec<Vec<u8>> {
    let d = c.dim();
    let n = 3usize.pow(d as u32);
    let mut perms: Vec<Vec<usize>> = Vec::new();
    let mut idx: Vec<usize> = (0..d).collect();
    heap_permutations(&mut idx, &mut perms);
    const VPERMS: [[u8; 3]; 6] =
        [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let apply = |coord: &[usize], vals: &[usize], v: &TritVector| -> usize {
        let mut out = alloc::vec![0u8; d];
        for k in 0..d {
            out[coord[k]] = VPERMS[vals[coord[k]]][v.trits()[k] as usize];
        }
        out.iter().fold(0usize, |acc, &t| acc * 3 + t as usize)
    };
    let (a, b) = (c.a(), c.b());
    let (x, y) = (c.x().unwrap(), c.y().unwrap());
    let (ai, bi, xi, yi) = (a.index(), b.index(), x.index(), y.index());
    let mut out = Vec::new();
    let mut vals = alloc::vec![0usize; d];
    for coord in &perms {
        loop {
            let fixes = apply(coord, &vals, a) == ai
                && apply(coord, &vals, b) == bi
                && {
                    let (px, py) = (apply(coord, &vals, x), apply(coord, &vals, y));
                    (px == xi && py == yi) || (px == yi && py == xi)
                };
            if fixes {
                let table: Vec<u8> = (0..n)
                    .map(|v| apply(coord, &vals, &TritVector::from_index(d, v)) as u8)
                    .collect();
                let identity = table.iter().enumerate().all(|(k, &m)| k == m as usize);
                if !identity {
                    out.push(table);
                    if out.len() >= MAX_SYMS {
                        return out;
                    }
                }
            }
            // odometer over per-coordinate value permutations
            let mut k = 0;
            loop {
                if k == d {
                    break;
                }
                vals[k] += 1;
                if vals[k] < 6 {
                    break;
                }
                vals[k] = 0;
                k += 1;
            }
            if k == d {
                break;
            }
        }
    }
    out
}

fn heap_permutations(items: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    fn rec(k: usize, items: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == 1 {
            out.push(items.clone());
            return;
        }
        for i in 0..k {
            rec(k - 1, items, out);
            if k % 2 == 0 {
                items.swap(i, k - 1);
            } else {
                items.swap(0, k - 1);
            }
        }
    }
    let len = items.len();
    rec(len, items, out);
}

fn tie_order(seed: Option<u64>) -> [u8; 8] {
    let mut tie = [0u8, 1, 2, 3, 4, 5, 6, 7];
    if let Some(s) = seed {
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        tie.shuffle(&mut rng);
    }
    tie
}

fn index_of(v: &TritVector) -> u8 {
    v.index() as u8
}

fn cert_from_indices(d: usize, seq: &[u8], omitted: Vec<TritVector>) -> CertificateData {
    let path: Vec<TritVector> =
        seq.iter().map(|&i| TritVector::from_index(d, i as usize)).collect();
    CertificateData {
        dim: d,
        start: path[0].clone(),
        end: path.last().unwrap().clone(),
        omitted,
        path,
    }
}

fn covering_query(c: &Configuration) -> Result<Query, SearchError> {
    let x = c.x()?;
    let y = c.y()?;
    let blocked = (1u128 << index_of(x)) | (1u128 << index_of(y));
    let n = 3u32.pow(c.dim() as u32);
    Ok(Query { start: index_of(c.a()), end: Some(index_of(c.b())), blocked, target: n - 2 })
}

/// Searches for a loose path from `a` to `b` omitting `x` and `y` and
/// covering every other vertex.
///
/// Budgeted attempts (one per restart seed, each capped by the node limit)
/// run first; if none finds a path the search reruns to exhaustion, so an
/// uncovered verdict is always a completed proof. Only the stop callback
/// forces the inconclusive outcome.
pub fn find_covering_path(
    c: &Configuration,
    budget: &SearchBudget,
    stop: &mut dyn FnMut() -> bool,
) -> Result<SearchOutcome, SearchError> {
    find_covering_path_flagged(c, budget, SearchFlags::default(), stop)
}

/// [`find_covering_path`] with explicit prune flags (for cross-checking).
pub fn find_covering_path_flagged(
    c: &Configuration,
    budget: &SearchBudget,
    flags: SearchFlags,
    stop: &mut dyn FnMut() -> bool,
) -> Result<SearchOutcome, SearchError> {
    let engine = Engine::new(c.dim(), flags)?;
    let query = covering_query(c)?;
    let mut total_nodes = 0u64;
    for &seed in &budget.restart_seeds {
        let mut nodes = 0u64;
        let walk = engine.walk(
            &query,
            Some(budget.per_config_node_limit),
            &tie_order(Some(seed)),
            &[],
            &mut nodes,
            stop,
        );
        total_nodes += nodes;
        match walk {
            Walk::Found(seq) => return finish_covered(c, &seq, total_nodes),
            Walk::Exhausted => return Ok(SearchOutcome::ProvenUncovered { nodes: total_nodes }),
            Walk::Stopped => {
                if stop() {
                    return Ok(SearchOutcome::Inconclusive { nodes: total_nodes });
                }
            }
        }
    }
    // exhaustive pass: unbounded nodes, deterministic order, and with the
    // query's stabiliser pruning symmetric subtrees
    let mut nodes = 0u64;
    let syms = query_stabilizer(c);
    let walk = engine.walk(&query, None, &tie_order(None), &syms, &mut nodes, stop);
    total_nodes += nodes;
    match walk {
        Walk::Found(seq) => finish_covered(c, &seq, total_nodes),
        Walk::Exhausted => Ok(SearchOutcome::ProvenUncovered { nodes: total_nodes }),
        Walk::Stopped => Ok(SearchOutcome::Inconclusive { nodes: total_nodes }),
    }
}

/// Budgeted attempts only - the fast first phase of the base-case pipeline.
/// Returns a verified certificate, a completed nonexistence proof (possible
/// when the tree is small), or `Inconclusive` once the budget runs out.
pub fn search_attempts(
    c: &Configuration,
    budget: &SearchBudget,
    stop: &mut dyn FnMut() -> bool,
) -> Result<SearchOutcome, SearchError> {
    let engine = Engine::new(c.dim(), SearchFlags::default())?;
    let query = covering_query(c)?;
    let mut total_nodes = 0u64;
    for &seed in &budget.restart_seeds {
        let mut nodes = 0u64;
        let walk = engine.walk(
            &query,
            Some(budget.per_config_node_limit),
            &tie_order(Some(seed)),
            &[],
            &mut nodes,
            stop,
        );
        total_nodes += nodes;
        match walk {
            Walk::Found(seq) => return finish_covered(c, &seq, total_nodes),
            Walk::Exhausted => return Ok(SearchOutcome::ProvenUncovered { nodes: total_nodes }),
            Walk::Stopped => {}
        }
    }
    Ok(SearchOutcome::Inconclusive { nodes: total_nodes })
}

/// Searches for an almost-Hamilton path from `a` omitting `{x, y}` with a
/// free endpoint; much cheaper than the endpoint-constrained search, and
/// every find settles several configurations at once via [`settled_by`].
pub fn find_free_endpoint(
    c: &Configuration,
    seed: u64,
    node_limit: u64,
    stop: &mut dyn FnMut() -> bool,
) -> Result<Option<CertificateData>, SearchError> {
    let engine = Engine::new(c.dim(), SearchFlags::default())?;
    let x = c.x()?;
    let y = c.y()?;
    let blocked = (1u128 << index_of(x)) | (1u128 << index_of(y));
    let n = 3u32.pow(c.dim() as u32);
    let query = Query { start: index_of(c.a()), end: None, blocked, target: n - 2 };
    let mut nodes = 0u64;
    let walk =
        engine.walk(&query, Some(node_limit), &tie_order(Some(seed)), &[], &mut nodes, stop);
    match walk {
        Walk::Found(seq) => {
            let omitted = alloc::vec![x.clone(), y.clone()];
            let cert = cert_from_indices(c.dim(), &seq, omitted);
            verify(&cert).map_err(SearchError::EngineUnsound)?;
            Ok(Some(cert))
        }
        _ => Ok(None),
    }
}

fn finish_covered(c: &Configuration, seq: &[u8], nodes: u64) -> Result<SearchOutcome, SearchError> {
    let _ = nodes;
    let omitted = alloc::vec![c.x()?.clone(), c.y()?.clone()];
    let cert = cert_from_indices(c.dim(), seq, omitted);
    verify(&cert).map_err(SearchError::EngineUnsound)?;
    Ok(SearchOutcome::Covered(cert))
}

// benchmarking hook: exhaustive covering search, optionally memoised
#[doc(hidden)]
pub fn profile_find(c: &Configuration, ordering: u8, seeds: u64, cap: u64) -> (bool, u64) {
    let mut engine = Engine::new(c.dim(), SearchFlags::default()).unwrap();
    engine.ordering = ordering;
    let query = covering_query(c).unwrap();
    let mut total = 0u64;
    for seed in 1..=seeds {
        let mut nodes = 0u64;
        let walk = engine.walk(&query, Some(cap), &tie_order(Some(seed)), &[], &mut nodes, &mut || false);
        total += nodes;
        match walk {
            Walk::Found(_) => return (true, total),
            Walk::Exhausted => return (false, total),
            Walk::Stopped => {}
        }
    }
    (false, total)
}

#[doc(hidden)]
pub fn profile_exhaustive(c: &Configuration, use_syms: bool, cap: Option<u64>) -> (bool, u64, bool) {
    let engine = Engine::new(c.dim(), SearchFlags::default()).unwrap();
    let query = covering_query(c).unwrap();
    let mut nodes = 0u64;
    let tie = tie_order(None);
    let syms = if use_syms { query_stabilizer(c) } else { Vec::new() };
    let walk = engine.walk(&query, cap, &tie, &syms, &mut nodes, &mut || false);
    match walk {
        Walk::Found(_) => (true, nodes, true),
        Walk::Exhausted => (false, nodes, true),
        Walk::Stopped => (false, nodes, false),
    }
}

#[doc(hidden)]
#[derive(Debug, Default, Clone)]
pub struct ProfileStats {
    pub nodes: u64,
    pub memo_hits: u64,
    pub comp_prunes: u64,
    pub match_prunes: u64,
    pub dep_prunes: u64,
    pub complete: bool,
    pub by_depth: Vec<u64>,
}

#[doc(hidden)]
pub fn profile_stats(c: &Configuration, cap: Option<u64>) -> ProfileStats {
    let engine = Engine::new(c.dim(), SearchFlags::default()).unwrap();
    let query = covering_query(c).unwrap();
    let mut nodes = 0u64;
    let tie = tie_order(None);
    let syms = query_stabilizer(c);
    let mut stats = ProfileStats { by_depth: alloc::vec![0; 129], ..Default::default() };
    stats.memo_hits = syms.len() as u64; // reused: stabiliser size
    let mut used: u128 = (1u128 << query.start) | query.blocked;
    let mut seq = alloc::vec![query.start];
    let mut stop = || false;
    let alive: Vec<u16> = (0..syms.len().min(MAX_SYMS) as u16).collect();
    let mut cx = Ctx {
        node_limit: cap,
        tie: &tie,
        nodes: &mut nodes,
        stop: &mut stop,
        stats: Some(&mut stats),
        syms: &syms,
    };
    let res = engine.step(&query, &mut used, &mut seq, 1, &alive, &mut cx);
    stats.nodes = nodes;
    stats.complete = !matches!(res, StepResult::Stopped);
    stats
}

// Knuth-style tree size estimator: repeated random root-to-leaf descents,
// each contributing the product of branching factors along its way; the
// mean estimates the pruned tree's node count.
#[doc(hidden)]
pub fn profile_estimate(c: &Configuration, probes: u64, seed: u64) -> f64 {
    use rand::Rng;
    let engine = Engine::new(c.dim(), SearchFlags::default()).unwrap();
    let query = covering_query(c).unwrap();
    let syms = query_stabilizer(c);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut total = 0f64;
    for _ in 0..probes {
        let mut used: u128 = (1u128 << query.start) | query.blocked;
        let mut tail = query.start;
        let mut covered = 1u32;
        let mut alive: Vec<u16> = (0..syms.len() as u16).collect();
        let mut weight = 1f64;
        let mut estimate = 1f64;
        loop {
            let all = (1u128 << engine.n).wrapping_sub(1);
            let avail = !used & all;
            let moves = engine.legal_moves(&query, avail, tail, covered, &alive, &syms);
            if moves.is_empty() {
                break;
            }
            weight *= moves.len() as f64;
            estimate += weight;
            let (mid, end) = moves[rng.gen_range(0..moves.len())];
            if covered + 2 == query.target {
                break;
            }
            used |= (1u128 << mid) | (1u128 << end);
            covered += 2;
            alive.retain(|&si| {
                let sym = &syms[si as usize];
                sym[mid as usize] == mid && sym[end as usize] == end
            });
            tail = end;
        }
        total += estimate;
    }
    total / probes as f64
}

impl Engine {
    // the exact move set step_inner would explore, for the estimator
    fn legal_moves(
        &self,
        q: &Query,
        avail: u128,
        tail: u8,
        covered: u32,
        alive: &[u16],
        syms: &[Vec<u8>],
    ) -> Vec<(u8, u8)> {
        let forced = match self.tail_dependent(avail, tail, q.end) {
            Some(f) => f,
            None => return Vec::new(),
        };
        let forced = match self.component_forced(avail) {
            Some(f) => forced | f,
            None => return Vec::new(),
        };
        if forced.count_ones() > 2 || !self.classes_balanced(avail) {
            return Vec::new();
        }
        let finishing = covered + 2 == q.target;
        let mut out = Vec::new();
        for c in 0..self.d {
            let [p, qq] = self.partners[tail as usize][c];
            let pb = 1u128 << p;
            let qb = 1u128 << qq;
            if avail & pb == 0 || avail & qb == 0 {
                continue;
            }
            if forced & !(pb | qb) != 0 {
                continue;
            }
            for (mid, end) in [(p, qq), (qq, p)] {
                if let Some(b) = q.end {
                    if mid == b || (end == b) != finishing {
                        continue;
                    }
                }
                let dominated = alive.iter().any(|&si| {
                    let sym = &syms[si as usize];
                    (sym[mid as usize], sym[end as usize]) < (mid, end)
                });
                if !dominated {
                    out.push((mid, end));
                }
            }
        }
        out
    }
}

/// Outcome of the loose-Hamilton-path nonexistence check.
#[derive(Debug, Clone)]
pub enum NonexistenceOutcome {
    /// The exhaustive search completed without finding a path.
    Absence { nodes: u64 },
    /// A verified loose Hamilton path, falsifying the claimed absence.
    Counterexample(CertificateData),
    /// Interrupted by the stop callback.
    Aborted { nodes: u64 },
}

/// Exhaustively decides whether `Q(d)` contains a loose Hamilton path, for
/// `d` in `{2, 3}`.
///
/// Symmetry reduction: every single vertex normalises to the all-zero
/// vertex, so the path may be assumed to start there; the stabiliser of
/// that vertex still permutes coordinates transitively and may swap the
/// values 1 and 2 within each coordinate, so the first edge can be fixed to
/// the lifting edge of coordinate 1, traversed towards the vertex with
/// leading trit 2.
pub fn check_lhp_nonexistence(d: usize) -> Result<NonexistenceOutcome, SearchError> {
    check_lhp_nonexistence_with(d, &mut || false)
}

/// [`check_lhp_nonexistence`] with a stop callback.
pub fn check_lhp_nonexistence_with(
    d: usize,
    stop: &mut dyn FnMut() -> bool,
) -> Result<NonexistenceOutcome, SearchError> {
    if !(d == 2 || d == 3) {
        return Err(SearchError::DimOutOfScope(d));
    }
    let engine = Engine::new(d, SearchFlags::default())?;
    let n = 3u32.pow(d as u32);
    // fixed first move: 00..0 -> 20..0 with middle 10..0
    let w = 3usize.pow((d - 1) as u32);
    let (mid, end) = (w as u8, (2 * w) as u8);
    let query = Query { start: 0, end: None, blocked: 0, target: n };
    let mut nodes = 0u64;
    let mut used: u128 = 1 | (1u128 << mid) | (1u128 << end);
    let mut seq = alloc::vec![0u8, mid, end];
    let tie = tie_order(None);
    let mut cx =
        Ctx { node_limit: None, tie: &tie, nodes: &mut nodes, stop, stats: None, syms: &[] };
    let res = engine.step(&query, &mut used, &mut seq, 3, &[], &mut cx);
    match res {
        StepResult::Found => {
            let cert = cert_from_indices(d, &seq, Vec::new());
            verify(&cert).map_err(SearchError::EngineUnsound)?;
            Ok(NonexistenceOutcome::Counterexample(cert))
        }
        StepResult::Exhausted => Ok(NonexistenceOutcome::Absence { nodes }),
        StepResult::Stopped => Ok(NonexistenceOutcome::Aborted { nodes }),
    }
}

/// Finds some loose Hamilton path of `Q(d)` by plain search over all start
/// vertices (sanity fixture for tiny dimensions; no symmetry fixing).
pub fn find_lhp(d: usize) -> Result<Option<CertificateData>, SearchError> {
    let engine = Engine::new(d, SearchFlags::default())?;
    let n = 3u32.pow(d as u32);
    for start in 0..n as u8 {
        let query = Query { start, end: None, blocked: 0, target: n };
        let mut nodes = 0u64;
        match engine.walk(&query, None, &tie_order(None), &[], &mut nodes, &mut || false) {
            Walk::Found(seq) => {
                let cert = cert_from_indices(d, &seq, Vec::new());
                verify(&cert).map_err(SearchError::EngineUnsound)?;
                return Ok(Some(cert));
            }
            Walk::Exhausted => continue,
            Walk::Stopped => unreachable!("no stop source"),
        }
    }
    Ok(None)
}

/// All configurations a verified covering path settles: the up-to-four
/// endpoint readings of the edge set, each in both directions, normalised.
/// The settled configurations' certificates are the symmetry images of the
/// corresponding variant of `cert`.
pub fn settled_by(
    cert: &CertificateData,
) -> Result<Vec<(Configuration, CertificateData)>, SearchError> {
    verify(cert).map_err(SearchError::EngineUnsound)?;
    let path = LoosePath::from_vertices(cert.path.clone()).expect("verified path");
    let (x, y) = match cert.omitted.as_slice() {
        [x, y] => (x.clone(), y.clone()),
        _ => return Ok(Vec::new()),
    };
    let mut out: BTreeMap<Configuration, CertificateData> = BTreeMap::new();
    for (s, e) in endpoint_variants(&path) {
        let Some(var) = variant_path(&path, &s, &e) else { continue };
        for p in [var.clone(), reverse(&var)] {
            let config =
                Configuration::quad(p.start().clone(), p.end().clone(), x.clone(), y.clone())?;
            let norm = normalize(&config)?;
            let mapped = norm
                .symmetry
                .apply_certificate(&p.to_certificate(alloc::vec![x.clone(), y.clone()]))?;
            verify(&mapped).map_err(SearchError::EngineUnsound)?;
            out.entry(norm.config).or_insert(mapped);
        }
    }
    Ok(out.into_iter().collect())
}

/// Complete accounting of the dimension-4 base case. `covered` and
/// `uncovered` partition the configurations a finished run classified;
/// anything interrupted before its proof completed lands in
/// `inconclusive`, never in `uncovered`.
#[derive(Debug, Clone, Default)]
pub struct CoverageLedger {
    pub covered: BTreeMap<Configuration, CertificateData>,
    pub uncovered: BTreeSet<Configuration>,
    pub inconclusive: BTreeSet<Configuration>,
}

impl CoverageLedger {
    pub fn is_complete(&self) -> bool {
        self.inconclusive.is_empty()
    }
}

/// Single-threaded reference pipeline for the base case:
///
/// 1. every normalised configuration gets independent budgeted attempts;
/// 2. found paths settle their sibling configurations through
///    [`settled_by`], first writer (in configuration order) winning;
/// 3. everything still unresolved is searched to exhaustion.
///
/// Each configuration's outcome is a pure function of the budget, so any
/// scheduling of the same phases (the CLI parallelises phases 1 and 3)
/// reproduces the ledger byte for byte.
pub fn run_base_case(
    budget: &SearchBudget,
    stop: &mut dyn FnMut() -> bool,
    progress: &mut dyn FnMut(usize, usize),
) -> Result<CoverageLedger, SearchError> {
    let all = crate::symmetry::enumerate_normalized_4configs(4)?;
    let total = all.len();
    let mut found: Vec<(Configuration, CertificateData)> = Vec::new();
    let mut done = 0usize;
    for c in &all {
        if let SearchOutcome::Covered(cert) = search_attempts(c, budget, stop)? {
            found.push((c.clone(), cert));
        }
        done += 1;
        progress(done, total);
    }
    let mut ledger = CoverageLedger::default();
    settle_found(&mut ledger, &found)?;
    let remaining: Vec<Configuration> =
        all.iter().filter(|c| !ledger.covered.contains_key(*c)).cloned().collect();
    // phase 1 already spent the seeded attempts; go straight to exhaustion
    let exhaustive = SearchBudget { restart_seeds: Vec::new(), ..budget.clone() };
    let mut late: Vec<(Configuration, CertificateData)> = Vec::new();
    for c in &remaining {
        match find_covering_path(c, &exhaustive, stop)? {
            SearchOutcome::Covered(cert) => late.push((c.clone(), cert)),
            SearchOutcome::ProvenUncovered { .. } => {
                ledger.uncovered.insert(c.clone());
            }
            SearchOutcome::Inconclusive { .. } => {
                ledger.inconclusive.insert(c.clone());
            }
        }
    }
    settle_found(&mut ledger, &late)?;
    ledger.uncovered.retain(|c| !ledger.covered.contains_key(c));
    ledger.inconclusive.retain(|c| !ledger.covered.contains_key(c));
    Ok(ledger)
}

/// Merges found paths into the ledger, settling sibling configurations;
/// deterministic because entries merge in configuration order.
pub fn settle_found(
    ledger: &mut CoverageLedger,
    found: &[(Configuration, CertificateData)],
) -> Result<(), SearchError> {
    let mut sorted: Vec<&(Configuration, CertificateData)> = found.iter().collect();
    sorted.sort_by(|l, r| l.0.cmp(&r.0));
    for (_, cert) in sorted {
        for (config, mapped) in settled_by(cert)? {
            ledger.covered.entry(config).or_insert(mapped);
        }
    }
    Ok(())
}

/// Rebuilds a coverage ledger from externally supplied certificates,
/// re-verifying every record from scratch; invalid records are reported
/// (1-based index) and skipped. `uncovered` lists the configurations no
/// record settles.
pub fn ledger_from_certificates<'a, I>(
    certs: I,
) -> Result<(CoverageLedger, Vec<(usize, VerifyError)>), SearchError>
where
    I: IntoIterator<Item = &'a CertificateData>,
{
    let mut ledger = CoverageLedger::default();
    let mut rejected = Vec::new();
    let mut found = Vec::new();
    for (i, cert) in certs.into_iter().enumerate() {
        match verify(cert) {
            Ok(()) if cert.omitted.len() == 2 => {
                let config = Configuration::quad(
                    cert.start.clone(),
                    cert.end.clone(),
                    cert.omitted[0].clone(),
                    cert.omitted[1].clone(),
                )?;
                found.push((config, cert.clone()));
            }
            Ok(()) => rejected.push((
                i + 1,
                VerifyError::CoverageCount { have: cert.omitted.len(), expected: 2 },
            )),
            Err(e) => rejected.push((i + 1, e)),
        }
    }
    settle_found(&mut ledger, &found)?;
    for c in crate::symmetry::enumerate_normalized_4configs(4)? {
        if !ledger.covered.contains_key(&c) {
            ledger.uncovered.insert(c);
        }
    }
    Ok((ledger, rejected))
}
