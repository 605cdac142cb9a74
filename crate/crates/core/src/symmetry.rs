//! Symmetries of `Q(d)` and configuration normalisation.
//!
//! A symmetry is a coordinate permutation combined with one value permutation
//! of `{0,1,2}` per (post-permutation) coordinate; these generate the
//! automorphisms used throughout. Normalisation picks a canonical
//! representative of a configuration's orbit: permute the values in each row
//! by first traversal, sort the rows lexicographically, and for
//! 4-configurations compare with the variant in which the two omitted
//! vertices are swapped, keeping the row-major lexicographic minimum.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::config::{ConfigError, Configuration};
use crate::cube::{CubeError, Hyperedge, TritVector, MAX_DIM};
use crate::paths::{CertificateData, LoosePath};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SymmetryError {
    Cube(CubeError),
    Config(ConfigError),
    /// The supplied coordinate map is not a bijection on `[d]`.
    NotACoordPermutation,
    /// The supplied value map is not a bijection on `{0,1,2}`.
    NotAValuePermutation,
    /// Object dimension does not match the symmetry's.
    DimMismatch(usize, usize),
}

impl fmt::Display for SymmetryError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymmetryError::Cube(e) => write!(f, "{e}"),
            SymmetryError::Config(e) => write!(f, "{e}"),
            SymmetryError::NotACoordPermutation => write!(f, "coordinate map is not a bijection"),
            SymmetryError::NotAValuePermutation => write!(f, "value map is not a bijection"),
            SymmetryError::DimMismatch(a, b) => write!(f, "dimension mismatch: {a} vs {b}"),
        }
    }
}

impl core::error::Error for SymmetryError {}

impl From<CubeError> for SymmetryError {
    fn from(e: CubeError) -> Self {
        SymmetryError::Cube(e)
    }
}

impl From<ConfigError> for SymmetryError {
    fn from(e: ConfigError) -> Self {
        SymmetryError::Config(e)
    }
}

/// A permutation of the values `{0,1,2}`; `v` maps to `perm[v]`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct ValuePerm([u8; 3]);

impl ValuePerm {
    pub const IDENTITY: ValuePerm = ValuePerm([0, 1, 2]);

    pub fn new(map: [u8; 3]) -> Result<Self, SymmetryError> {
        let mut seen = [false; 3];
        for &t in &map {
            if t > 2 || seen[t as usize] {
                return Err(SymmetryError::NotAValuePermutation);
            }
            seen[t as usize] = true;
        }
        Ok(ValuePerm(map))
    }

    /// The transposition swapping `a` and `b`.
    pub fn swap(a: u8, b: u8) -> Result<Self, SymmetryError> {
        if a > 2 || b > 2 {
            return Err(SymmetryError::NotAValuePermutation);
        }
        let mut map = [0u8, 1, 2];
        map.swap(a as usize, b as usize);
        Ok(ValuePerm(map))
    }

    pub fn apply(&self, t: u8) -> u8 {
        self.0[t as usize]
    }

    /// `self` after `first`.
    pub fn compose(&self, first: &ValuePerm) -> ValuePerm {
        ValuePerm([
            self.0[first.0[0] as usize],
            self.0[first.0[1] as usize],
            self.0[first.0[2] as usize],
        ])
    }

    pub fn inverse(&self) -> ValuePerm {
        let mut inv = [0u8; 3];
        for v in 0..3u8 {
            inv[self.0[v as usize] as usize] = v;
        }
        ValuePerm(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0 == [0, 1, 2]
    }
}

impl fmt::Debug for ValuePerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}{}{})", self.0[0], self.0[1], self.0[2])
    }
}

/// A coordinate permutation plus one value permutation per coordinate.
///
/// Applying a symmetry `s` to a vertex `v` yields the vertex whose
/// coordinate `i` equals `value_perms[i]` applied to `v` at the coordinate
/// sent to `i`; symmetries act on vertices, edges, paths and configurations,
/// and the action is a group action.
#[derive(Clone, PartialEq, Eq)]
pub struct Symmetry {
    // coord_map[k] = destination of 0-based coordinate k
    coord_map: Vec<usize>,
    // indexed by destination coordinate
    value_perms: Vec<ValuePerm>,
}

impl Symmetry {
    pub fn identity(d: usize) -> Self {
        Symmetry {
            coord_map: (0..d).collect(),
            value_perms: alloc::vec![ValuePerm::IDENTITY; d],
        }
    }

    /// Builds a symmetry from a 1-based coordinate map (`coordinate i` moves
    /// to `coord_map[i-1]`) and per-destination-coordinate value
    /// permutations.
    pub fn new(coord_map: &[usize], value_perms: Vec<ValuePerm>) -> Result<Self, SymmetryError> {
        let d = coord_map.len();
        if value_perms.len() != d {
            return Err(SymmetryError::DimMismatch(d, value_perms.len()));
        }
        let mut seen = alloc::vec![false; d];
        let mut map0 = Vec::with_capacity(d);
        for &i in coord_map {
            if i == 0 || i > d || seen[i - 1] {
                return Err(SymmetryError::NotACoordPermutation);
            }
            seen[i - 1] = true;
            map0.push(i - 1);
        }
        Ok(Symmetry { coord_map: map0, value_perms })
    }

    /// The coordinate transposition `i <-> j` (1-based), identity values.
    pub fn swap_coords(d: usize, i: usize, j: usize) -> Result<Self, SymmetryError> {
        if i == 0 || i > d || j == 0 || j > d {
            return Err(SymmetryError::NotACoordPermutation);
        }
        let mut s = Symmetry::identity(d);
        s.coord_map.swap(i - 1, j - 1);
        Ok(s)
    }

    /// Identity coordinates, with the given value permutation at 1-based
    /// coordinate `i`.
    pub fn value_perm_at(d: usize, i: usize, perm: ValuePerm) -> Result<Self, SymmetryError> {
        if i == 0 || i > d {
            return Err(SymmetryError::NotACoordPermutation);
        }
        let mut s = Symmetry::identity(d);
        s.value_perms[i - 1] = perm;
        Ok(s)
    }

    pub fn dim(&self) -> usize {
        self.coord_map.len()
    }

    /// Destination (1-based) of 1-based coordinate `i`.
    pub fn image_of_coord(&self, i: usize) -> Result<usize, SymmetryError> {
        if i == 0 || i > self.dim() {
            return Err(SymmetryError::NotACoordPermutation);
        }
        Ok(self.coord_map[i - 1] + 1)
    }

    pub fn is_identity(&self) -> bool {
        self.coord_map.iter().enumerate().all(|(k, &m)| k == m)
            && self.value_perms.iter().all(ValuePerm::is_identity)
    }

    pub fn apply(&self, v: &TritVector) -> Result<TritVector, SymmetryError> {
        let d = self.dim();
        if v.dim() != d {
            return Err(SymmetryError::DimMismatch(d, v.dim()));
        }
        let mut out = alloc::vec![0u8; d];
        for k in 0..d {
            let dest = self.coord_map[k];
            out[dest] = self.value_perms[dest].apply(v.trits()[k]);
        }
        Ok(TritVector::new(out)?)
    }

    pub fn apply_edge(&self, e: &Hyperedge) -> Result<Hyperedge, SymmetryError> {
        let [a, b, c] = e.vertices();
        Ok(Hyperedge::new(self.apply(a)?, self.apply(b)?, self.apply(c)?)?)
    }

    pub fn apply_config(&self, c: &Configuration) -> Result<Configuration, SymmetryError> {
        let verts: Result<Vec<_>, _> = c.vertices().iter().map(|v| self.apply(v)).collect();
        let verts = verts?;
        Ok(match verts.len() {
            2 => Configuration::pair(verts[0].clone(), verts[1].clone())?,
            _ => Configuration::quad(
                verts[0].clone(),
                verts[1].clone(),
                verts[2].clone(),
                verts[3].clone(),
            )?,
        })
    }

    pub fn apply_path(&self, p: &LoosePath) -> Result<LoosePath, SymmetryError> {
        let verts: Result<Vec<_>, _> = p.vertices().iter().map(|v| self.apply(v)).collect();
        Ok(LoosePath::from_vertices(verts?).expect("symmetry image of a loose path is a loose path"))
    }

    /// Image of a whole certificate: path, endpoints and omitted vertices.
    pub fn apply_certificate(&self, c: &CertificateData) -> Result<CertificateData, SymmetryError> {
        let path: Result<Vec<_>, _> = c.path.iter().map(|v| self.apply(v)).collect();
        let omitted: Result<Vec<_>, _> = c.omitted.iter().map(|v| self.apply(v)).collect();
        Ok(CertificateData {
            dim: c.dim,
            start: self.apply(&c.start)?,
            end: self.apply(&c.end)?,
            omitted: omitted?,
            path: path?,
        })
    }

    /// `self` after `first`.
    pub fn compose(&self, first: &Symmetry) -> Result<Symmetry, SymmetryError> {
        let d = self.dim();
        if first.dim() != d {
            return Err(SymmetryError::DimMismatch(d, first.dim()));
        }
        let mut coord_map = alloc::vec![0usize; d];
        let mut value_perms = alloc::vec![ValuePerm::IDENTITY; d];
        for k in 0..d {
            coord_map[k] = self.coord_map[first.coord_map[k]];
        }
        for mid in 0..d {
            let dest = self.coord_map[mid];
            value_perms[dest] = self.value_perms[dest].compose(&first.value_perms[mid]);
        }
        Ok(Symmetry { coord_map, value_perms })
    }

    pub fn inverse(&self) -> Symmetry {
        let d = self.dim();
        let mut coord_map = alloc::vec![0usize; d];
        let mut value_perms = alloc::vec![ValuePerm::IDENTITY; d];
        for old in 0..d {
            let new = self.coord_map[old];
            coord_map[new] = old;
            value_perms[old] = self.value_perms[new].inverse();
        }
        Symmetry { coord_map, value_perms }
    }

    /// Uniformly random symmetry, for randomized checks.
    pub fn random<R: rand::Rng + ?Sized>(d: usize, rng: &mut R) -> Symmetry {
        use rand::seq::SliceRandom;
        let mut coord_map: Vec<usize> = (0..d).collect();
        coord_map.shuffle(rng);
        let value_perms = (0..d)
            .map(|_| {
                let mut vals = [0u8, 1, 2];
                vals.shuffle(rng);
                ValuePerm(vals)
            })
            .collect();
        Symmetry { coord_map, value_perms }
    }
}

impl fmt::Debug for Symmetry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Symmetry(coords {:?}, values {:?})", self.coord_map, self.value_perms)
    }
}

/// Lexicographically minimal relabeling of a row: in order of first
/// appearance the entries read `0`, then `1`, then `2`, with no gaps.
/// Returns the new row and the value permutation used (completed to a
/// bijection, unused values taking the remaining targets in ascending
/// order).
pub fn first_traversal_row(row: &[u8]) -> Result<(Vec<u8>, ValuePerm), SymmetryError> {
    for &t in row {
        if t > 2 {
            return Err(SymmetryError::Cube(CubeError::BadTrit(t)));
        }
    }
    let mut out = row.to_vec();
    let perm = ftr_in_place(&mut out);
    Ok((out, ValuePerm(perm)))
}

// in-place first traversal; returns the value map as [u8;3]
fn ftr_in_place(row: &mut [u8]) -> [u8; 3] {
    let mut map = [3u8; 3];
    let mut next = 0u8;
    for t in row.iter_mut() {
        let slot = &mut map[*t as usize];
        if *slot == 3 {
            *slot = next;
            next += 1;
        }
        *t = *slot;
    }
    for slot in map.iter_mut() {
        if *slot == 3 {
            *slot = next;
            next += 1;
        }
    }
    map
}

/// Result of [`normalize`]: the canonical representative plus the exact
/// transformation that produced it. `config == symmetry(xy_swapped ?
/// input.swap_xy() : input)`.
#[derive(Debug, Clone)]
pub struct Normalized {
    pub config: Configuration,
    pub symmetry: Symmetry,
    pub xy_swapped: bool,
}

// fixed-size matrix scratch: rows[k][j] = trit of column j at coordinate k
#[derive(Clone, Copy)]
struct Mat {
    rows: [[u8; 4]; MAX_DIM],
    d: usize,
    cols: usize,
}

impl Mat {
    fn from_config(c: &Configuration) -> Mat {
        let d = c.dim();
        let cols = c.len();
        let mut rows = [[0u8; 4]; MAX_DIM];
        for (j, v) in c.vertices().iter().enumerate() {
            for k in 0..d {
                rows[k][j] = v.trits()[k];
            }
        }
        Mat { rows, d, cols }
    }

    fn to_config(&self) -> Result<Configuration, ConfigError> {
        let mut verts = Vec::with_capacity(self.cols);
        for j in 0..self.cols {
            let mut trits = alloc::vec![0u8; self.d];
            for k in 0..self.d {
                trits[k] = self.rows[k][j];
            }
            verts.push(TritVector::new(trits).expect("trits stay in range"));
        }
        match self.cols {
            2 => Configuration::pair(verts[0].clone(), verts[1].clone()),
            _ => Configuration::quad(
                verts[0].clone(),
                verts[1].clone(),
                verts[2].clone(),
                verts[3].clone(),
            ),
        }
    }

    fn swap_xy(&self) -> Mat {
        let mut m = *self;
        for k in 0..m.d {
            m.rows[k].swap(2, 3);
        }
        m
    }

    fn row_cmp(&self, other: &Mat) -> Ordering {
        for k in 0..self.d {
            match self.rows[k][..self.cols].cmp(&other.rows[k][..other.cols]) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        Ordering::Equal
    }
}

// first-traversal every row, then stable-sort rows lexicographically.
// order[new] = old coordinate, vperms[old] = value permutation applied to
// that row.
fn renorm(m: &Mat) -> (Mat, [usize; MAX_DIM], [[u8; 3]; MAX_DIM]) {
    let mut out = *m;
    let mut vperms = [[0u8, 1, 2]; MAX_DIM];
    for k in 0..m.d {
        vperms[k] = ftr_in_place(&mut out.rows[k][..m.cols]);
    }
    let mut order = [0usize; MAX_DIM];
    for (k, slot) in order.iter_mut().enumerate().take(m.d) {
        *slot = k;
    }
    // insertion sort: stable, and d <= MAX_DIM is tiny
    for i in 1..m.d {
        let mut j = i;
        while j > 0
            && out.rows[order[j - 1]][..m.cols] > out.rows[order[j]][..m.cols]
        {
            order.swap(j - 1, j);
            j -= 1;
        }
    }
    let mut sorted = *m;
    for new in 0..m.d {
        sorted.rows[new] = out.rows[order[new]];
    }
    (sorted, order, vperms)
}

fn symmetry_from(order: &[usize; MAX_DIM], vperms: &[[u8; 3]; MAX_DIM], d: usize) -> Symmetry {
    let mut coord_map = alloc::vec![0usize; d];
    let mut value_perms = alloc::vec![ValuePerm::IDENTITY; d];
    for new in 0..d {
        let old = order[new];
        coord_map[old] = new;
        value_perms[new] = ValuePerm(vperms[old]);
    }
    Symmetry { coord_map, value_perms }
}

/// Canonical representative of the configuration's symmetry orbit (including
/// the `x<->y` relabeling for 4-configurations), with the witnessing
/// transformation. The output is a fixpoint of `normalize`.
pub fn normalize(c: &Configuration) -> Result<Normalized, SymmetryError> {
    let m = Mat::from_config(c);
    let (m1, ord1, vp1) = renorm(&m);
    let s1 = symmetry_from(&ord1, &vp1, m.d);
    if c.len() == 2 {
        return Ok(Normalized { config: m1.to_config()?, symmetry: s1, xy_swapped: false });
    }
    let (m2, ord2, vp2) = renorm(&m1.swap_xy());
    if m2.row_cmp(&m1) == Ordering::Less {
        let s2 = symmetry_from(&ord2, &vp2, m.d);
        Ok(Normalized {
            config: m2.to_config()?,
            symmetry: s2.compose(&s1)?,
            xy_swapped: true,
        })
    } else {
        Ok(Normalized { config: m1.to_config()?, symmetry: s1, xy_swapped: false })
    }
}

/// Whether the configuration is its own normal form.
pub fn is_normalized(c: &Configuration) -> Result<bool, SymmetryError> {
    Ok(normalize(c)?.config == *c)
}

/// The set of all normalised 4-configurations of `Q(d)`, in ascending order.
///
/// Iterates every ordered 4-tuple of distinct vertices and normalises it;
/// transparency over efficiency, per the base-case pipeline.
pub fn enumerate_normalized_4configs(d: usize) -> Result<Vec<Configuration>, SymmetryError> {
    let mut set = BTreeSet::new();
    enumerate_normalized_into(d, 0, 1, &mut set)?;
    set.iter().map(|flat| unflatten(flat, d)).collect()
}

/// Partition of [`enumerate_normalized_4configs`] by first tuple entry:
/// chunk `part` of `parts` processes the outer-loop slice `a = part,
/// part+parts, ...`. Merging the unions of all chunks' outputs reproduces the
/// full set.
pub fn enumerate_normalized_4configs_chunk(
    d: usize,
    part: usize,
    parts: usize,
) -> Result<Vec<Configuration>, SymmetryError> {
    let mut set = BTreeSet::new();
    enumerate_normalized_into(d, part, parts, &mut set)?;
    set.iter().map(|flat| unflatten(flat, d)).collect()
}

fn unflatten(flat: &[u8], d: usize) -> Result<Configuration, SymmetryError> {
    let mut m = Mat { rows: [[0u8; 4]; MAX_DIM], d, cols: 4 };
    for k in 0..d {
        m.rows[k].copy_from_slice(&flat[4 * k..4 * k + 4]);
    }
    Ok(m.to_config()?)
}

fn enumerate_normalized_into(
    d: usize,
    part: usize,
    parts: usize,
    set: &mut BTreeSet<Vec<u8>>,
) -> Result<(), SymmetryError> {
    if d == 0 || d > MAX_DIM {
        return Err(SymmetryError::Cube(CubeError::DimTooLarge(d)));
    }
    let n = 3usize.pow(d as u32);
    assert!(n >= 4, "need at least four vertices");
    let verts: Vec<[u8; MAX_DIM]> = (0..n)
        .map(|i| {
            let mut t = [0u8; MAX_DIM];
            let v = TritVector::from_index(d, i);
            t[..d].copy_from_slice(v.trits());
            t
        })
        .collect();
    let mut m = Mat { rows: [[0u8; 4]; MAX_DIM], d, cols: 4 };
    let mut flat = [0u8; 4 * MAX_DIM];
    let mut a = part;
    while a < n {
        for b in 0..n {
            if b == a {
                continue;
            }
            for x in 0..n {
                if x == a || x == b {
                    continue;
                }
                for y in 0..n {
                    if y == a || y == b || y == x {
                        continue;
                    }
                    for k in 0..d {
                        m.rows[k] = [verts[a][k], verts[b][k], verts[x][k], verts[y][k]];
                    }
                    let (m1, _, _) = renorm(&m);
                    let (m2, _, _) = renorm(&m1.swap_xy());
                    let min = if m2.row_cmp(&m1) == Ordering::Less { &m2 } else { &m1 };
                    for k in 0..d {
                        flat[4 * k..4 * k + 4].copy_from_slice(&min.rows[k]);
                    }
                    let key = &flat[..4 * d];
                    if !set.contains(key) {
                        set.insert(key.to_vec());
                    }
                }
            }
        }
        a += parts;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube::is_edge;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn v(s: &str) -> TritVector {
        s.parse().unwrap()
    }

    fn quad(a: &str, b: &str, x: &str, y: &str) -> Configuration {
        Configuration::quad(v(a), v(b), v(x), v(y)).unwrap()
    }

    fn random_vertex<R: Rng>(d: usize, rng: &mut R) -> TritVector {
        TritVector::from_index(d, rng.gen_range(0..3usize.pow(d as u32)))
    }

    fn random_quad<R: Rng>(d: usize, rng: &mut R) -> Configuration {
        loop {
            let vs: Vec<_> = (0..4).map(|_| random_vertex(d, rng)).collect();
            if let Ok(c) =
                Configuration::quad(vs[0].clone(), vs[1].clone(), vs[2].clone(), vs[3].clone())
            {
                return c;
            }
        }
    }

    #[test]
    fn first_traversal_examples() {
        let (row, perm) = first_traversal_row(&[2, 0, 2, 1]).unwrap();
        assert_eq!(row, [0, 1, 0, 2]);
        assert_eq!(perm.apply(2), 0);
        assert_eq!(perm.apply(0), 1);
        assert_eq!(perm.apply(1), 2);
        assert_eq!(first_traversal_row(&[0, 0, 0, 0]).unwrap().0, [0, 0, 0, 0]);
        // hand-derived, confirmed against a brute-force lex-min over all 6
        // value permutations in `first_traversal_is_lex_min`
        assert_eq!(first_traversal_row(&[1, 1, 0, 2]).unwrap().0, [0, 0, 1, 2]);
    }

    #[test]
    fn first_traversal_is_lex_min() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let perms: Vec<ValuePerm> = {
            let mut all = Vec::new();
            for a in 0..3u8 {
                for b in 0..3u8 {
                    for c in 0..3u8 {
                        if let Ok(p) = ValuePerm::new([a, b, c]) {
                            all.push(p);
                        }
                    }
                }
            }
            all
        };
        assert_eq!(perms.len(), 6);
        for _ in 0..300 {
            let len = rng.gen_range(1..=8);
            let row: Vec<u8> = (0..len).map(|_| rng.gen_range(0..3)).collect();
            let (got, _) = first_traversal_row(&row).unwrap();
            let best = perms
                .iter()
                .map(|p| row.iter().map(|&t| p.apply(t)).collect::<Vec<_>>())
                .min()
                .unwrap();
            assert_eq!(got, best, "row {row:?}");
        }
    }

    #[test]
    fn apply_matches_split_example() {
        // swapping coordinates 1 and 4 with identity values equals split(v,1)
        let s = Symmetry::swap_coords(4, 1, 4).unwrap();
        assert_eq!(s.apply(&v("0121")).unwrap(), v("1120"));
        assert_eq!(s.apply(&v("0121")).unwrap(), crate::cube::split(&v("0121"), 1).unwrap());
    }

    #[test]
    fn group_action_compose_and_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..2000 {
            let d = rng.gen_range(1..=6);
            let s = Symmetry::random(d, &mut rng);
            let t = Symmetry::random(d, &mut rng);
            let x = random_vertex(d, &mut rng);
            let st = s.compose(&t).unwrap();
            assert_eq!(st.apply(&x).unwrap(), s.apply(&t.apply(&x).unwrap()).unwrap());
            let inv = s.inverse();
            assert_eq!(inv.apply(&s.apply(&x).unwrap()).unwrap(), x);
            assert_eq!(inv.inverse(), s);
        }
        assert!(Symmetry::identity(4).inverse().is_identity());
    }

    #[test]
    fn symmetries_preserve_edges() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..10_000 {
            let d = rng.gen_range(1..=5);
            let s = Symmetry::random(d, &mut rng);
            let x = random_vertex(d, &mut rng);
            let i = rng.gen_range(1..=d);
            let e = crate::cube::lifting_edge(&x, i).unwrap();
            let img = s.apply_edge(&e).unwrap();
            let [a, b, c] = img.vertices().clone();
            assert!(is_edge(&a, &b, &c).unwrap());
        }
    }

    #[test]
    fn normalize_worked_example() {
        // the normalisation walkthrough: the x,y swap variant loses
        let c = quad("2201", "0211", "2011", "1021");
        let n = normalize(&c).unwrap();
        assert_eq!(n.config, quad("0000", "0011", "0101", "0122"));
        assert!(!n.xy_swapped);
        // the witness transforms the input into the result exactly
        assert_eq!(n.symmetry.apply_config(&c).unwrap(), n.config);
    }

    #[test]
    fn normalize_witness_with_swap() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let mut saw_swap = 0;
        for _ in 0..2000 {
            let d = rng.gen_range(2..=5);
            let c = random_quad(d, &mut rng);
            let n = normalize(&c).unwrap();
            let base = if n.xy_swapped { c.swap_xy().unwrap() } else { c.clone() };
            assert_eq!(n.symmetry.apply_config(&base).unwrap(), n.config);
            saw_swap += n.xy_swapped as u32;
        }
        assert!(saw_swap > 0, "expected some orbits to pick the swapped variant");
    }

    #[test]
    fn normalize_is_idempotent_and_orbit_constant() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for _ in 0..2000 {
            let d = rng.gen_range(2..=5);
            let c = random_quad(d, &mut rng);
            let n = normalize(&c).unwrap();
            assert_eq!(normalize(&n.config).unwrap().config, n.config, "fixpoint");
            let s = Symmetry::random(d, &mut rng);
            let img = s.apply_config(&c).unwrap();
            assert_eq!(normalize(&img).unwrap().config, n.config, "orbit constant");
            let sw = c.swap_xy().unwrap();
            assert_eq!(normalize(&sw).unwrap().config, n.config, "xy swap");
        }
    }

    #[test]
    fn normalize_pair_configurations() {
        let c = Configuration::pair(v("2201"), v("0211")).unwrap();
        let n = normalize(&c).unwrap();
        assert!(!n.xy_swapped);
        assert_eq!(n.symmetry.apply_config(&c).unwrap(), n.config);
        assert_eq!(normalize(&n.config).unwrap().config, n.config);
        // every pair normalises to (all zeros, first-traversal image)
        assert_eq!(n.config.a(), &v("0000"));
    }

    #[test]
    fn normalized_rows_are_sorted_and_ftr_fixed() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..500 {
            let d = rng.gen_range(2..=5);
            let c = random_quad(d, &mut rng);
            let n = normalize(&c).unwrap().config;
            let rows: Vec<Vec<u8>> = (0..d)
                .map(|k| n.vertices().iter().map(|u| u.trits()[k]).collect())
                .collect();
            for k in 0..d {
                let (ftr, _) = first_traversal_row(&rows[k]).unwrap();
                assert_eq!(ftr, rows[k], "rows of a normal form are first-traversal fixed");
                if k > 0 {
                    assert!(rows[k - 1] <= rows[k], "rows sorted");
                }
            }
        }
    }
}
