//! Sparse exact chains: formal sums of simplices in a fixed degree.
//!
//! Terms live in a BTree map keyed by the canonical simplex tuple, so
//! iteration order is deterministic and explicit zeros are never stored.
//! Serialization is line-oriented JSON, one record per simplex, sorted by the
//! path form of the simplex so equal chains serialize identically regardless
//! of the window they were computed on.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::coeff::{self, Coeff, CoeffMode};
use crate::complex::VertexRef;
use crate::error::ChainError;
use crate::product::{ProductComplex, PVertex, Region, Simplex};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Chain {
    degree: usize,
    terms: BTreeMap<Simplex, Coeff>,
}

impl Chain {
    pub fn zero(degree: usize) -> Chain {
        Chain { degree, terms: BTreeMap::new() }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, s: &Simplex) -> Coeff {
        self.terms.get(s).copied().unwrap_or_else(Coeff::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Simplex, &Coeff)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &Simplex> {
        self.terms.keys()
    }

    /// Accumulates `c` on `s`, dropping the entry if it cancels to zero.
    pub fn add_term(&mut self, s: Simplex, c: Coeff) {
        debug_assert_eq!(s.degree(), self.degree);
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(s);
        match entry {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let v = *e.get() + c;
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }

    pub fn add(&self, other: &Chain) -> Result<Chain, ChainError> {
        if self.degree != other.degree {
            return Err(ChainError::DegreeMismatch(self.degree, other.degree));
        }
        let mut out = self.clone();
        for (s, c) in other.iter() {
            out.add_term(s.clone(), *c);
        }
        Ok(out)
    }

    /// self += k * other. Degrees must match.
    pub fn add_scaled(&mut self, other: &Chain, k: Coeff) -> Result<(), ChainError> {
        if self.degree != other.degree {
            return Err(ChainError::DegreeMismatch(self.degree, other.degree));
        }
        if k.is_zero() {
            return Ok(());
        }
        for (s, c) in other.iter() {
            self.add_term(s.clone(), *c * k);
        }
        Ok(())
    }

    pub fn scale(&self, k: Coeff) -> Chain {
        if k.is_zero() {
            return Chain::zero(self.degree);
        }
        let terms = self.terms.iter().map(|(s, c)| (s.clone(), *c * k)).collect();
        Chain { degree: self.degree, terms }
    }

    pub fn sub(&self, other: &Chain) -> Result<Chain, ChainError> {
        let mut out = self.clone();
        out.add_scaled(other, coeff::int(-1))?;
        Ok(out)
    }

    /// The combinatorial boundary: alternating sum of vertex-deleted faces,
    /// accumulated with exact cancellation.
    pub fn boundary(&self) -> Result<Chain, ChainError> {
        if self.degree == 0 {
            return Err(ChainError::BoundaryOfZeroChain);
        }
        let mut out = Chain::zero(self.degree - 1);
        for (s, c) in self.iter() {
            let mut sign = coeff::int(1);
            for i in 0..=s.degree() {
                out.add_term(s.face(i), *c * sign);
                sign = -sign;
            }
        }
        Ok(out)
    }

    /// Keeps exactly the simplices satisfying the predicate.
    pub fn restrict(&self, pred: impl Fn(&Simplex) -> bool) -> Chain {
        let terms = self
            .terms
            .iter()
            .filter(|(s, _)| pred(s))
            .map(|(s, c)| (s.clone(), *c))
            .collect();
        Chain { degree: self.degree, terms }
    }

    pub fn restrict_region(&self, pc: &ProductComplex, region: Region) -> Chain {
        self.restrict(|s| region.contains_simplex(pc, s))
    }

    /// True iff the boundary restricted to the region vanishes.
    pub fn is_cycle_on(&self, pc: &ProductComplex, region: Region) -> bool {
        match self.boundary() {
            Ok(b) => b.restrict_region(pc, region).is_zero(),
            Err(_) => false,
        }
    }

    /// Max |coefficient| over the support; 0 for the empty chain.
    pub fn sup_norm(&self) -> Coeff {
        self.terms
            .values()
            .map(coeff::abs)
            .max()
            .unwrap_or_else(Coeff::zero)
    }

    /// Number of distinct nonzero coefficient values.
    pub fn distinct_values(&self) -> usize {
        let set: std::collections::BTreeSet<&Coeff> = self.terms.values().collect();
        set.len()
    }
}

/// One serialized chain record.
#[derive(Serialize, Deserialize)]
struct ChainRecord {
    s: Vec<Vec<Vec<u8>>>,
    c: String,
}

/// Serializes a chain as line-oriented JSON, sorted by the path form of the
/// simplex. Bit-exact: reduced coefficients, canonical vertex paths.
pub fn to_jsonl(chain: &Chain, pc: &ProductComplex) -> String {
    let mut records: Vec<(Vec<Vec<Vec<u8>>>, String)> = chain
        .iter()
        .map(|(s, c)| {
            let key: Vec<Vec<Vec<u8>>> = s
                .vertices()
                .iter()
                .map(|v| {
                    (0..pc.arity())
                        .map(|f| pc.factor(f).path(v.coord(f)).0.clone())
                        .collect()
                })
                .collect();
            (key, coeff::format_coeff(c))
        })
        .collect();
    records.sort();
    let mut out = String::new();
    for (s, c) in records {
        let rec = ChainRecord { s, c };
        out.push_str(&serde_json::to_string(&rec).expect("chain record serializes"));
        out.push('\n');
    }
    out
}

/// Parses a line-JSON chain. Every vertex must resolve inside the product
/// window and every record must be a valid simplex of the declared degree.
pub fn from_jsonl(
    text: &str,
    pc: &ProductComplex,
    mode: CoeffMode,
) -> Result<Chain, ChainError> {
    let mut degree: Option<usize> = None;
    let mut chain = Chain::zero(0);
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let bad = |msg: String| ChainError::BadRecord { line: lineno + 1, msg };
        let rec: ChainRecord =
            serde_json::from_str(line).map_err(|e| bad(format!("not a chain record: {e}")))?;
        let mut verts = Vec::new();
        for vert in &rec.s {
            if vert.len() != pc.arity() {
                return Err(bad(format!(
                    "vertex has {} coordinates, product has {}",
                    vert.len(),
                    pc.arity()
                )));
            }
            let mut coords = [0u32; 3];
            for (f, path) in vert.iter().enumerate() {
                coords[f] = pc
                    .factor(f)
                    .resolve(&VertexRef(path.clone()))
                    .map_err(|e| bad(e.to_string()))?;
            }
            verts.push(PVertex(coords));
        }
        let s = Simplex::from_verts(pc, verts).map_err(|e| bad(e.to_string()))?;
        let d = s.degree();
        match degree {
            None => {
                degree = Some(d);
                chain = Chain::zero(d);
            }
            Some(d0) if d0 != d => {
                return Err(bad(format!("mixed degrees {d0} and {d}")));
            }
            _ => {}
        }
        let c = coeff::parse_coeff(&rec.c, mode).map_err(|e| bad(e.to_string()))?;
        chain.add_term(s, c);
    }
    Ok(chain)
}
