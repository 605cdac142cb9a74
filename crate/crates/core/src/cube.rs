//! Vertex and edge model of the cube hypergraph `Q(d)`.
//!
//! Vertices are sequences over `{0,1,2}` of length `d`; edges are unordered
//! triples of pairwise distinct vertices that agree on `d-1` coordinates (the
//! free coordinate then necessarily takes all three values). Coordinates are
//! 1-based in every public interface, matching the index set `[d]`; the
//! internal layout is 0-based and does not leak.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

/// Practical ceiling on the dimension; `3^12` vertices is desk scale.
pub const MAX_DIM: usize = 12;

/// Errors from the vertex/edge model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CubeError {
    /// A trit outside `{0,1,2}` was supplied.
    BadTrit(u8),
    /// A vertex string contained a character outside `{'0','1','2'}`.
    BadTritChar(char),
    /// Dimension above [`MAX_DIM`].
    DimTooLarge(usize),
    /// Two vertices of different dimensions were combined.
    DimMismatch(usize, usize),
    /// A 1-based coordinate outside `1..=d`.
    CoordOutOfRange { coord: usize, dim: usize },
    /// A triple that cannot even be tested for edge-ness (e.g. repeated vertex
    /// of the wrong shape) - reported by constructors, not by `is_edge`.
    NotAnEdge,
}

impl fmt::Display for CubeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CubeError::BadTrit(t) => write!(f, "trit {t} outside {{0,1,2}}"),
            CubeError::BadTritChar(c) => write!(f, "character {c:?} outside {{'0','1','2'}}"),
            CubeError::DimTooLarge(d) => write!(f, "dimension {d} exceeds maximum {MAX_DIM}"),
            CubeError::DimMismatch(a, b) => write!(f, "dimension mismatch: {a} vs {b}"),
            CubeError::CoordOutOfRange { coord, dim } => {
                write!(f, "coordinate {coord} out of range for dimension {dim}")
            }
            CubeError::NotAnEdge => write!(f, "triple is not an edge of Q(d)"),
        }
    }
}

impl core::error::Error for CubeError {}

/// A vertex of `Q(d)`: a sequence of length `d` over `{0,1,2}`.
///
/// The textual form is the string `a1 a2 ... ad`, first coordinate first,
/// e.g. `"0121"`. Ordering is lexicographic, which coincides with the order
/// of base-3 values (see [`TritVector::index`]).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TritVector {
    trits: Vec<u8>,
}

impl TritVector {
    /// Builds a vertex from raw trits, validating each entry.
    pub fn new(trits: Vec<u8>) -> Result<Self, CubeError> {
        if trits.len() > MAX_DIM {
            return Err(CubeError::DimTooLarge(trits.len()));
        }
        if let Some(&t) = trits.iter().find(|&&t| t > 2) {
            return Err(CubeError::BadTrit(t));
        }
        Ok(TritVector { trits })
    }

    /// The all-zero vertex of dimension `d`.
    pub fn zero(d: usize) -> Self {
        TritVector { trits: alloc::vec![0; d] }
    }

    /// Vertex with the given base-3 value, most significant trit first, so
    /// that `from_index` enumerates `V_d` in lexicographic order.
    pub fn from_index(d: usize, mut idx: usize) -> Self {
        let mut trits = alloc::vec![0u8; d];
        for k in (0..d).rev() {
            trits[k] = (idx % 3) as u8;
            idx /= 3;
        }
        TritVector { trits }
    }

    /// Base-3 value of the vertex in `[0, 3^d)`.
    pub fn index(&self) -> usize {
        self.trits.iter().fold(0usize, |acc, &t| acc * 3 + t as usize)
    }

    pub fn dim(&self) -> usize {
        self.trits.len()
    }

    pub fn trits(&self) -> &[u8] {
        &self.trits
    }

    /// Value at 1-based coordinate `i`.
    pub fn coord(&self, i: usize) -> Result<u8, CubeError> {
        self.check_coord(i)?;
        Ok(self.trits[i - 1])
    }

    /// Copy with 1-based coordinate `i` set to `value`.
    pub fn with_coord(&self, i: usize, value: u8) -> Result<Self, CubeError> {
        self.check_coord(i)?;
        if value > 2 {
            return Err(CubeError::BadTrit(value));
        }
        let mut trits = self.trits.clone();
        trits[i - 1] = value;
        Ok(TritVector { trits })
    }

    /// Copy with the last coordinate replaced by `value`: the paper-style
    /// `v<s>` notation.
    pub fn with_last(&self, value: u8) -> Result<Self, CubeError> {
        self.with_coord(self.dim(), value)
    }

    /// Restriction to the first `len` coordinates.
    pub fn restrict(&self, len: usize) -> Result<Self, CubeError> {
        if len > self.dim() {
            return Err(CubeError::CoordOutOfRange { coord: len, dim: self.dim() });
        }
        Ok(TritVector { trits: self.trits[..len].to_vec() })
    }

    /// The vertex `(v, value)` of dimension `d+1`.
    pub fn append(&self, value: u8) -> Result<Self, CubeError> {
        if value > 2 {
            return Err(CubeError::BadTrit(value));
        }
        if self.dim() + 1 > MAX_DIM {
            return Err(CubeError::DimTooLarge(self.dim() + 1));
        }
        let mut trits = self.trits.clone();
        trits.push(value);
        Ok(TritVector { trits })
    }

    fn check_coord(&self, i: usize) -> Result<(), CubeError> {
        if i == 0 || i > self.dim() {
            Err(CubeError::CoordOutOfRange { coord: i, dim: self.dim() })
        } else {
            Ok(())
        }
    }
}

impl fmt::Display for TritVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.trits.is_empty() {
            // the empty sequence of Q(0)
            return write!(f, "e");
        }
        for &t in &self.trits {
            write!(f, "{}", t)?;
        }
        Ok(())
    }
}

impl fmt::Debug for TritVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for TritVector {
    type Err = CubeError;

    fn from_str(s: &str) -> Result<Self, CubeError> {
        if s == "e" {
            return Ok(TritVector { trits: Vec::new() });
        }
        let mut trits = Vec::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '0' => trits.push(0),
                '1' => trits.push(1),
                '2' => trits.push(2),
                _ => return Err(CubeError::BadTritChar(c)),
            }
        }
        TritVector::new(trits)
    }
}

/// An edge of `Q(d)`: three pairwise distinct vertices agreeing on exactly
/// `d-1` coordinates; on the free coordinate the values are exactly
/// `{0,1,2}`. Stored sorted, so equality is set equality.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Hyperedge {
    verts: [TritVector; 3],
}

impl Hyperedge {
    /// Validates the edge invariant and canonicalises the vertex order.
    pub fn new(a: TritVector, b: TritVector, c: TritVector) -> Result<Self, CubeError> {
        if !is_edge(&a, &b, &c)? {
            return Err(CubeError::NotAnEdge);
        }
        let mut verts = [a, b, c];
        verts.sort();
        Ok(Hyperedge { verts })
    }

    pub fn vertices(&self) -> &[TritVector; 3] {
        &self.verts
    }

    pub fn dim(&self) -> usize {
        self.verts[0].dim()
    }

    pub fn contains(&self, v: &TritVector) -> bool {
        self.verts.iter().any(|u| u == v)
    }

    /// The 1-based coordinate on which the three vertices differ.
    pub fn free_coordinate(&self) -> usize {
        for k in 0..self.dim() {
            if self.verts[0].trits[k] != self.verts[1].trits[k] {
                return k + 1;
            }
        }
        unreachable!("edge invariant guarantees a free coordinate")
    }
}

impl fmt::Display for Hyperedge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{} {} {}}}", self.verts[0], self.verts[1], self.verts[2])
    }
}

impl fmt::Debug for Hyperedge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// One of the three copies of `Q(d-1)` obtained by fixing a coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Layer {
    /// 1-based coordinate whose value is fixed.
    pub split_coordinate: usize,
    /// The fixed value in `{0,1,2}`.
    pub value: u8,
}

impl Layer {
    pub fn new(split_coordinate: usize, value: u8, d: usize) -> Result<Self, CubeError> {
        if split_coordinate == 0 || split_coordinate > d {
            return Err(CubeError::CoordOutOfRange { coord: split_coordinate, dim: d });
        }
        if value > 2 {
            return Err(CubeError::BadTrit(value));
        }
        Ok(Layer { split_coordinate, value })
    }

    pub fn contains(&self, v: &TritVector) -> bool {
        v.coord(self.split_coordinate) == Ok(self.value)
    }
}

/// All `3^d` vertices of `Q(d)` in lexicographic order. `d = 0` yields the
/// single empty sequence.
pub fn enumerate_vertices(d: usize) -> Result<Vec<TritVector>, CubeError> {
    if d > MAX_DIM {
        return Err(CubeError::DimTooLarge(d));
    }
    let n = 3usize.pow(d as u32);
    Ok((0..n).map(|i| TritVector::from_index(d, i)).collect())
}

/// All `d * 3^(d-1)` edges of `Q(d)`, each exactly once. `d = 0` yields the
/// empty list.
pub fn enumerate_edges(d: usize) -> Result<Vec<Hyperedge>, CubeError> {
    if d > MAX_DIM {
        return Err(CubeError::DimTooLarge(d));
    }
    if d == 0 {
        return Ok(Vec::new());
    }
    let mut edges = Vec::with_capacity(d * 3usize.pow(d as u32 - 1));
    for v in enumerate_vertices(d)? {
        // each edge is produced once: from its vertex with value 0 on the
        // free coordinate
        for i in 1..=d {
            if v.coord(i)? == 0 {
                edges.push(lifting_edge(&v, i)?);
            }
        }
    }
    Ok(edges)
}

/// Whether three vertices form an edge: identical on all but one coordinate,
/// which carries each of `{0,1,2}`.
pub fn is_edge(a: &TritVector, b: &TritVector, c: &TritVector) -> Result<bool, CubeError> {
    let d = a.dim();
    if b.dim() != d {
        return Err(CubeError::DimMismatch(d, b.dim()));
    }
    if c.dim() != d {
        return Err(CubeError::DimMismatch(d, c.dim()));
    }
    let mut free = None;
    for k in 0..d {
        let (ta, tb, tc) = (a.trits[k], b.trits[k], c.trits[k]);
        if ta == tb && tb == tc {
            continue;
        }
        if free.is_some() {
            return Ok(false);
        }
        // the free coordinate must carry all three values
        if ta == tb || tb == tc || ta == tc {
            return Ok(false);
        }
        free = Some(k);
    }
    Ok(free.is_some())
}

/// Number of coordinates in which the two vertices differ.
pub fn hamming(u: &TritVector, v: &TritVector) -> Result<usize, CubeError> {
    if u.dim() != v.dim() {
        return Err(CubeError::DimMismatch(u.dim(), v.dim()));
    }
    Ok(u.trits.iter().zip(&v.trits).filter(|(a, b)| a != b).count())
}

/// The edge whose vertices agree with `v` off the 1-based coordinate `i` and
/// take the values `0,1,2` there.
pub fn lifting_edge(v: &TritVector, i: usize) -> Result<Hyperedge, CubeError> {
    Hyperedge::new(v.with_coord(i, 0)?, v.with_coord(i, 1)?, v.with_coord(i, 2)?)
}

/// `v` with 1-based coordinate `i` and the last coordinate swapped (the
/// splitting move; an involution).
pub fn split(v: &TritVector, i: usize) -> Result<TritVector, CubeError> {
    v.check_coord(i)?;
    let d = v.dim();
    let mut trits = v.trits.clone();
    trits.swap(i - 1, d - 1);
    Ok(TritVector { trits })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::format;
    use alloc::string::ToString;
    use alloc::vec;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn v(s: &str) -> TritVector {
        s.parse().unwrap()
    }

    #[test]
    fn vertex_text_round_trip() {
        let x = v("0121");
        assert_eq!(x.to_string(), "0121");
        assert_eq!(x.dim(), 4);
        assert_eq!(x.coord(1).unwrap(), 0);
        assert_eq!(x.coord(4).unwrap(), 1);
        assert!("013".parse::<TritVector>().is_err());
    }

    #[test]
    fn index_is_lexicographic() {
        assert_eq!(v("0000").index(), 0);
        assert_eq!(v("0001").index(), 1);
        assert_eq!(v("2222").index(), 80);
        assert_eq!(TritVector::from_index(4, 80), v("2222"));
        for i in 0..81 {
            assert_eq!(TritVector::from_index(4, i).index(), i);
        }
    }

    #[test]
    fn enumerate_vertices_degenerate_and_small() {
        let v0 = enumerate_vertices(0).unwrap();
        assert_eq!(v0.len(), 1);
        assert_eq!(v0[0].dim(), 0);
        assert_eq!(v0[0].to_string(), "e");

        let v1 = enumerate_vertices(1).unwrap();
        assert_eq!(v1, vec![v("0"), v("1"), v("2")]);

        assert_eq!(enumerate_vertices(4).unwrap().len(), 81);
    }

    #[test]
    fn structural_counts_up_to_d7() {
        // |V_d| = 3^d and |E_d| = d * 3^(d-1)
        for d in 0..=7 {
            if d > MAX_DIM {
                break;
            }
            let n = 3usize.pow(d as u32);
            assert_eq!(enumerate_vertices(d).unwrap().len(), n);
            let expect_edges = if d == 0 { 0 } else { d * 3usize.pow(d as u32 - 1) };
            assert_eq!(enumerate_edges(d).unwrap().len(), expect_edges, "d={d}");
        }
    }

    #[test]
    fn is_edge_examples() {
        assert!(is_edge(&v("000"), &v("001"), &v("002")).unwrap());
        assert!(!is_edge(&v("000"), &v("011"), &v("022")).unwrap());
        assert!(is_edge(&v("010"), &v("110"), &v("210")).unwrap());
        assert!(!is_edge(&v("000"), &v("000"), &v("001")).unwrap());
        assert!(is_edge(&v("00"), &v("000"), &v("000")).is_err());
    }

    #[test]
    fn enumerate_edges_matches_brute_force_for_small_d() {
        // every triple passing is_edge appears exactly once in enumerate_edges
        for d in 1..=3 {
            let verts = enumerate_vertices(d).unwrap();
            let mut brute = vec![];
            for i in 0..verts.len() {
                for j in (i + 1)..verts.len() {
                    for k in (j + 1)..verts.len() {
                        if is_edge(&verts[i], &verts[j], &verts[k]).unwrap() {
                            brute.push(
                                Hyperedge::new(
                                    verts[i].clone(),
                                    verts[j].clone(),
                                    verts[k].clone(),
                                )
                                .unwrap(),
                            );
                        }
                    }
                }
            }
            let mut listed = enumerate_edges(d).unwrap();
            listed.sort();
            brute.sort();
            assert_eq!(listed, brute, "d={d}");
        }
    }

    #[test]
    fn lifting_edge_examples() {
        let e = lifting_edge(&v("000"), 3).unwrap();
        assert_eq!(format!("{e}"), "{000 001 002}");
        assert!(e.contains(&v("000")));
        let e = lifting_edge(&v("012"), 1).unwrap();
        assert!(e.contains(&v("012")) && e.contains(&v("112")) && e.contains(&v("212")));
        let e = lifting_edge(&v("21"), 2).unwrap();
        assert!(e.contains(&v("20")) && e.contains(&v("21")) && e.contains(&v("22")));
        assert_eq!(e.free_coordinate(), 2);
        assert!(lifting_edge(&v("21"), 3).is_err());
    }

    #[test]
    fn hamming_examples_and_metric_axioms() {
        assert_eq!(hamming(&v("0000"), &v("0000")).unwrap(), 0);
        assert_eq!(hamming(&v("0000"), &v("1111")).unwrap(), 4);
        // configuration A: the start has Hamming distance 4 to all others
        for other in ["1111", "1122", "2211"] {
            assert_eq!(hamming(&v("0000"), &v(other)).unwrap(), 4);
        }
        assert!(hamming(&v("00"), &v("000")).is_err());

        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..500 {
            let d = rng.gen_range(1..=6);
            let n = 3usize.pow(d as u32);
            let a = TritVector::from_index(d, rng.gen_range(0..n));
            let b = TritVector::from_index(d, rng.gen_range(0..n));
            let c = TritVector::from_index(d, rng.gen_range(0..n));
            let ab = hamming(&a, &b).unwrap();
            assert_eq!(ab, hamming(&b, &a).unwrap());
            assert_eq!(ab == 0, a == b);
            assert!(hamming(&a, &c).unwrap() <= ab + hamming(&b, &c).unwrap());
        }
    }

    #[test]
    fn split_examples_and_involution() {
        assert_eq!(split(&v("0121"), 4).unwrap(), v("0121"));
        assert_eq!(split(&v("0121"), 1).unwrap(), v("1120"));
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..500 {
            let d = rng.gen_range(1..=7);
            let x = TritVector::from_index(d, rng.gen_range(0..3usize.pow(d as u32)));
            let i = rng.gen_range(1..=d);
            assert_eq!(split(&split(&x, i).unwrap(), i).unwrap(), x);
        }
    }

    #[test]
    fn lifting_edges_pass_is_edge() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..500 {
            let d = rng.gen_range(1..=7);
            let x = TritVector::from_index(d, rng.gen_range(0..3usize.pow(d as u32)));
            let i = rng.gen_range(1..=d);
            let e = lifting_edge(&x, i).unwrap();
            assert!(e.contains(&x));
            let [a, b, c] = e.vertices().clone();
            assert!(is_edge(&a, &b, &c).unwrap());
        }
    }

    #[test]
    fn layer_membership() {
        let l = Layer::new(2, 1, 3).unwrap();
        assert!(l.contains(&v("010")));
        assert!(!l.contains(&v("000")));
        assert!(Layer::new(4, 0, 3).is_err());
    }
}
