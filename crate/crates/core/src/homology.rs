//! Reduced simplicial homology over GF(2), GF(p) and Q.
//!
//! The chain complex is augmented: `∂_0` sends every vertex to the empty
//! face, so Betti numbers are reduced and dimension `-1` carries the class
//! of the empty complex `{∅}`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::complex::{Face, SimplicialComplex};
use crate::error::{Error, Result};
use crate::linalg::{self, SparseMatrix};

pub const DEFAULT_PRIME: u64 = 32749;

/// Dense kernels are used below these sizes (matrix cells).
const DENSE_GF2_CELLS: usize = 1 << 20;
const DENSE_BAREISS_CELLS: usize = 1 << 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FieldSpec {
    Gf2,
    Gfp(u64),
    Rationals,
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

impl FieldSpec {
    pub fn gfp(p: u64) -> Result<Self> {
        if !is_prime(p) || p >= 1 << 32 {
            return Err(Error::InvalidInput(format!("{p} is not a prime below 2^32")));
        }
        Ok(if p == 2 { FieldSpec::Gf2 } else { FieldSpec::Gfp(p) })
    }

    /// Rank of an integer matrix after reduction into this field.
    pub fn rank(&self, m: &SparseMatrix) -> usize {
        match *self {
            FieldSpec::Gf2 if m.nrows * m.ncols <= DENSE_GF2_CELLS => linalg::rank_gf2_dense(m),
            FieldSpec::Gf2 => linalg::rank_gf2_sparse(m),
            FieldSpec::Gfp(p) => linalg::rank_gfp(m, p),
            FieldSpec::Rationals if m.nrows * m.ncols <= DENSE_BAREISS_CELLS => {
                linalg::bareiss_rank_of(m)
            }
            FieldSpec::Rationals => linalg::rank_rational_sparse(m),
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Gf2 => write!(f, "gf2"),
            FieldSpec::Gfp(p) => write!(f, "gfp:{p}"),
            FieldSpec::Rationals => write!(f, "rat"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gf2" => Ok(FieldSpec::Gf2),
            "rat" | "q" => Ok(FieldSpec::Rationals),
            "gfp" => FieldSpec::gfp(DEFAULT_PRIME),
            _ => {
                let p = s
                    .strip_prefix("gfp:")
                    .and_then(|p| p.parse().ok())
                    .ok_or_else(|| Error::InvalidInput(format!("unknown field {s:?}")))?;
                FieldSpec::gfp(p)
            }
        }
    }
}

/// Reduced Betti numbers; `reduced[0]` is dimension `-1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiVector {
    pub field: FieldSpec,
    pub reduced: Vec<u64>,
}

impl BettiVector {
    pub fn get(&self, dim: i32) -> u64 {
        usize::try_from(dim + 1).ok().and_then(|i| self.reduced.get(i)).copied().unwrap_or(0)
    }

    /// True iff the only nonzero entry is a 1 in dimension `d`.
    pub fn is_sphere(&self, d: i32) -> bool {
        self.get(d) == 1 && self.reduced.iter().sum::<u64>() == 1
    }

    /// Field-independent comparison of the numbers themselves (trailing
    /// zeros ignored).
    pub fn same_numbers(&self, other: &BettiVector) -> bool {
        let len = self.reduced.len().max(other.reduced.len());
        (0..len).all(|i| self.reduced.get(i).unwrap_or(&0) == other.reduced.get(i).unwrap_or(&0))
    }

    /// `Σ_{k ≥ -1} (-1)^k β̃_k`, which must equal `χ - 1`.
    pub fn reduced_euler(&self) -> i64 {
        self.reduced
            .iter()
            .enumerate()
            .map(|(i, &b)| if i % 2 == 1 { b as i64 } else { -(b as i64) })
            .sum()
    }

    /// Compact form such as `[-1:0 0:0 1:1]`.
    pub fn table(&self) -> String {
        let cells: Vec<String> =
            self.reduced.iter().enumerate().map(|(i, b)| format!("{}:{b}", i as i32 - 1)).collect();
        format!("[{}]", cells.join(" "))
    }
}

/// Faces of every dimension and the boundary matrices between them.
pub struct ChainComplex {
    /// `faces[k]` holds the `(k-1)`-faces, so `faces[0] == [∅]`.
    faces: Vec<Vec<Face>>,
    /// `boundaries[k]` is `∂_k : C_k -> C_{k-1}` for `k` in `0..=dim`.
    boundaries: Vec<SparseMatrix>,
}

/// Signed boundary from `upper` faces (columns) to `lower` faces (rows).
fn boundary_between(lower: &[Face], upper: &[Face]) -> SparseMatrix {
    let mut m = SparseMatrix::zeros(lower.len(), upper.len());
    let mut facet = Vec::new();
    for (j, face) in upper.iter().enumerate() {
        let col = &mut m.cols[j];
        for omit in 0..face.len() {
            facet.clear();
            facet.extend(face.iter().enumerate().filter(|&(i, _)| i != omit).map(|(_, &v)| v));
            let row = lower.binary_search(&facet).expect("facet of a face is a face");
            let sign = if omit % 2 == 0 { 1 } else { -1 };
            col.push((row as u32, sign));
        }
        col.sort_unstable_by_key(|e| e.0);
    }
    m
}

impl ChainComplex {
    pub fn new(k: &SimplicialComplex, cap: usize) -> Result<Self> {
        let dim = k.dim();
        // Largest dimensions first, so an overflow surfaces early.
        let mut order: Vec<i32> = (0..=dim).collect();
        order.sort_by_key(|&d| std::cmp::Reverse(k.estimate_faces(d)));
        let mut faces = vec![Vec::new(); (dim + 2) as usize];
        faces[0] = vec![Vec::new()];
        for d in order {
            faces[d as usize + 1] = k.faces_of_dim(d as usize, cap)?;
        }
        let boundaries = (1..faces.len()).map(|i| boundary_between(&faces[i - 1], &faces[i])).collect();
        Ok(ChainComplex { faces, boundaries })
    }

    pub fn dim(&self) -> i32 {
        self.faces.len() as i32 - 2
    }

    pub fn face_count(&self, dim: i32) -> usize {
        usize::try_from(dim + 1).ok().and_then(|i| self.faces.get(i)).map_or(0, Vec::len)
    }

    pub fn total_faces(&self) -> usize {
        self.faces.iter().map(Vec::len).sum()
    }

    /// Integer `∂_k`; zero-column matrices above the top dimension.
    pub fn boundary(&self, k: i32) -> SparseMatrix {
        match usize::try_from(k).ok().and_then(|i| self.boundaries.get(i)) {
            Some(m) => m.clone(),
            None => SparseMatrix::zeros(self.face_count(k - 1), self.face_count(k)),
        }
    }

    pub fn reduced_betti(&self, field: FieldSpec) -> BettiVector {
        let ranks: Vec<usize> = self.boundaries.iter().map(|m| field.rank(m)).collect();
        let rank = |k: i32| usize::try_from(k).ok().and_then(|i| ranks.get(i)).copied().unwrap_or(0);
        let reduced = (-1..=self.dim())
            .map(|k| (self.face_count(k) - rank(k) - rank(k + 1)) as u64)
            .collect();
        BettiVector { field, reduced }
    }
}

/// `∂_k` of `k` with entries reduced into `field` (canonical
/// representatives: `{0, 1}` for GF(2), `0..p` for GF(p), integers for Q).
pub fn boundary_matrix(
    k: &SimplicialComplex,
    dim: i32,
    field: FieldSpec,
    cap: usize,
) -> Result<SparseMatrix> {
    let lower = if dim == 0 {
        vec![Vec::new()]
    } else if dim > 0 {
        k.faces_of_dim(dim as usize - 1, cap)?
    } else {
        Vec::new()
    };
    let upper = if dim >= 0 { k.faces_of_dim(dim as usize, cap)? } else { vec![Vec::new()] };
    let mut m = if dim >= 0 {
        boundary_between(&lower, &upper)
    } else {
        SparseMatrix::zeros(0, upper.len())
    };
    let modulus = match field {
        FieldSpec::Gf2 => Some(2),
        FieldSpec::Gfp(p) => Some(p as i64),
        FieldSpec::Rationals => None,
    };
    if let Some(p) = modulus {
        for col in &mut m.cols {
            for e in col.iter_mut() {
                e.1 = e.1.rem_euclid(p);
            }
            col.retain(|e| e.1 != 0);
        }
    }
    Ok(m)
}

pub fn reduced_betti(k: &SimplicialComplex, field: FieldSpec, cap: usize) -> Result<BettiVector> {
    Ok(ChainComplex::new(k, cap)?.reduced_betti(field))
}

/// True iff over every listed field the reduced homology is that of the
/// `d`-sphere. Homology evidence only: it does not certify a homotopy type.
pub fn is_homology_sphere(
    k: &SimplicialComplex,
    d: i32,
    fields: &[FieldSpec],
    cap: usize,
) -> Result<bool> {
    if d < -1 {
        return Err(Error::InvalidInput(format!("sphere dimension {d} < -1")));
    }
    if fields.is_empty() {
        return Err(Error::InvalidInput("no coefficient field given".into()));
    }
    let chain = ChainComplex::new(k, cap)?;
    Ok(fields.iter().all(|&f| chain.reduced_betti(f).is_sphere(d)))
}
