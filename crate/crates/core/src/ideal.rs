//! Genus-`g` relation ideal generated by the vanishing of every monomial of
//! weight `> g`, closed under `D` and multiplication by variables.
//!
//! Each graded piece of weight `<= g` is an [`EchelonSpace`]; pieces of
//! weight in `g+1 ..= source_cap` are the full span of their monomials. The
//! closure is computed by a worklist: `D` pushes new relations one weight
//! down, multiplication pushes them up, and only the newly added directions
//! are propagated. The resulting spaces are the unique reduced bases of the
//! closure, independent of processing order.
//!
//! This is a sub-ideal of the true relation ideal; `contains` returning
//! `false` does not prove that a class is nonzero.

use std::collections::{BTreeMap, VecDeque};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exec::Exec;
use crate::lie::LieContext;
use crate::linalg::EchelonSpace;
use crate::parse::parse_poly;
use crate::poly::{enumerate_monomials, Monomial, Poly, Rational, Var};
use crate::weyl::Operator;

pub const MONOMIAL_ORDER: &str = "plex-interleaved-v1";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdealError {
    #[error("genus must be at least 2, got {0}")]
    InvalidGenus(u32),
    #[error("source cap {cap} must exceed the genus {genus}")]
    CapTooSmall { genus: u32, cap: u32 },
    #[error("weight {weight} exceeds the source cap {cap}")]
    CapExceeded { weight: u32, cap: u32 },
    #[error("closure check failed: {0}")]
    NotClosed(String),
    #[error("malformed ideal document: {0}")]
    Malformed(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationIdeal {
    genus: u32,
    source_cap: u32,
    // index = weight, for weights 0..=genus
    pieces: Vec<EchelonSpace>,
}

impl RelationIdeal {
    /// Default source cap `g + 3`.
    pub fn default_cap(genus: u32) -> u32 {
        genus + 3
    }

    pub fn build(genus: u32, source_cap: u32) -> Result<RelationIdeal, IdealError> {
        RelationIdeal::build_with(genus, source_cap, Exec::default())
    }

    pub fn build_with(
        genus: u32,
        source_cap: u32,
        exec: Exec,
    ) -> Result<RelationIdeal, IdealError> {
        if genus < 2 {
            return Err(IdealError::InvalidGenus(genus));
        }
        if source_cap <= genus {
            return Err(IdealError::CapTooSmall {
                genus,
                cap: source_cap,
            });
        }
        let d = LieContext::new(genus, source_cap)
            .expect("genus and cap validated")
            .make_d();
        let mut ideal = RelationIdeal {
            genus,
            source_cap,
            pieces: vec![EchelonSpace::new(); genus as usize + 1],
        };
        let mut queue: VecDeque<(u32, Vec<Poly>)> = (genus + 1..=source_cap)
            .map(|w| {
                (
                    w,
                    enumerate_monomials(w)
                        .into_iter()
                        .map(Poly::monomial)
                        .collect(),
                )
            })
            .collect();
        while let Some((w, delta)) = queue.pop_front() {
            if w >= 1 && w - 1 <= genus {
                let images = apply_all(&d, &delta, exec);
                let added = ideal.pieces[w as usize - 1].extend(images);
                if !added.is_empty() {
                    queue.push_back((w - 1, added));
                }
            }
            if w <= genus {
                for target in w + 1..=genus {
                    let i = target - w;
                    for v in [Var::p(i), Var::q(i)] {
                        let m = Monomial::var(v);
                        let products: Vec<Poly> =
                            delta.iter().map(|f| f.mul_monomial(&m)).collect();
                        let added = ideal.pieces[target as usize].extend(products);
                        if !added.is_empty() {
                            queue.push_back((target, added));
                        }
                    }
                }
            }
        }
        Ok(ideal)
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn source_cap(&self) -> u32 {
        self.source_cap
    }

    fn check_weight(&self, w: u32) -> Result<(), IdealError> {
        if w > self.source_cap {
            Err(IdealError::CapExceeded {
                weight: w,
                cap: self.source_cap,
            })
        } else {
            Ok(())
        }
    }

    fn check_poly(&self, f: &Poly) -> Result<(), IdealError> {
        match f.max_weight() {
            Some(w) => self.check_weight(w),
            None => Ok(()),
        }
    }

    /// The stored relation space of weight `w <= g`; `None` above the genus
    /// where the space is everything.
    pub fn piece(&self, w: u32) -> Option<&EchelonSpace> {
        self.pieces.get(w as usize)
    }

    /// Reduced basis of the weight-`w` relation space.
    pub fn relations(&self, w: u32) -> Result<Vec<Poly>, IdealError> {
        self.check_weight(w)?;
        Ok(match self.piece(w) {
            Some(space) => space.rows().cloned().collect(),
            None => enumerate_monomials(w)
                .into_iter()
                .rev()
                .map(Poly::monomial)
                .collect(),
        })
    }

    pub fn quotient_dimension(&self, w: u32) -> Result<usize, IdealError> {
        self.check_weight(w)?;
        Ok(match self.piece(w) {
            Some(space) => enumerate_monomials(w).len() - space.dim(),
            None => 0,
        })
    }

    /// Quotient dimensions for every weight `0..=source_cap`.
    pub fn quotient_dims(&self) -> BTreeMap<u32, usize> {
        (0..=self.source_cap)
            .map(|w| (w, self.quotient_dimension(w).expect("within cap")))
            .collect()
    }

    /// Standard monomials of weight `w`: a basis of the quotient in that
    /// weight, in ascending monomial order.
    pub fn quotient_basis(&self, w: u32) -> Vec<Monomial> {
        match self.piece(w) {
            Some(space) => enumerate_monomials(w)
                .into_iter()
                .filter(|m| !space.is_pivot(m))
                .collect(),
            None => Vec::new(),
        }
    }

    /// Standard monomials of every weight `<= g`.
    pub fn full_quotient_basis(&self) -> Vec<Monomial> {
        (0..=self.genus)
            .flat_map(|w| self.quotient_basis(w))
            .collect()
    }

    pub fn contains(&self, f: &Poly) -> Result<bool, IdealError> {
        Ok(self.normal_form(f)?.is_zero())
    }

    /// Reduction of `f` modulo the stored bases, weight by weight.
    pub fn normal_form(&self, f: &Poly) -> Result<Poly, IdealError> {
        self.check_poly(f)?;
        Ok(self.reduce_unchecked(f))
    }

    /// Image of `f` in the quotient. Components of weight `> g` are dropped
    /// without consulting the cap since every such monomial is a generator.
    pub fn project(&self, f: &Poly) -> Poly {
        self.reduce_unchecked(f)
    }

    fn reduce_unchecked(&self, f: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (w, part) in f.by_weight() {
            if let Some(space) = self.piece(w) {
                out += &space.reduce(&part);
            }
        }
        out
    }

    /// Asserts `D`-stability and stability under multiplication by every
    /// variable, for all weights up to the source cap.
    pub fn check_closure(&self, exec: Exec) -> Result<(), IdealError> {
        let d = LieContext::new(self.genus, self.source_cap)
            .expect("validated at build")
            .make_d();
        for w in 1..=self.source_cap {
            let rows = self.relations(w)?;
            for img in apply_all(&d, &rows, exec) {
                if !self.contains(&img)? {
                    return Err(IdealError::NotClosed(format!(
                        "D maps a weight-{w} relation outside the ideal: {img}"
                    )));
                }
            }
        }
        for w in 0..=self.genus {
            let rows = self.relations(w)?;
            for i in 1..=self.source_cap - w {
                for v in [Var::p(i), Var::q(i)] {
                    for r in &rows {
                        let prod = r.mul_monomial(&Monomial::var(v));
                        if !self.contains(&prod)? {
                            return Err(IdealError::NotClosed(format!(
                                "{v} * ({r}) is outside the ideal"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Document in the export schema, optionally restricted to one weight.
    pub fn to_document(&self, weight: Option<u32>) -> Result<IdealDocument, IdealError> {
        let weights: Vec<u32> = match weight {
            Some(w) => {
                self.check_weight(w)?;
                vec![w]
            }
            None => (0..=self.source_cap).collect(),
        };
        let mut docs = Vec::with_capacity(weights.len());
        for w in weights {
            let relations = self
                .relations(w)?
                .iter()
                .map(|r| {
                    r.terms()
                        .rev()
                        .map(|(m, c)| TermDocument {
                            monomial: m.to_string(),
                            coeff: c.to_string(),
                        })
                        .collect()
                })
                .collect();
            docs.push(WeightDocument {
                w,
                quotient_dim: self.quotient_dimension(w)?,
                relations,
            });
        }
        Ok(IdealDocument {
            genus: self.genus,
            source_cap: self.source_cap,
            monomial_order: MONOMIAL_ORDER.to_string(),
            format_version: FORMAT_VERSION,
            weights: docs,
        })
    }

    /// Rebuilds an ideal from a complete export document.
    pub fn from_document(doc: &IdealDocument) -> Result<RelationIdeal, IdealError> {
        let bad = |s: String| IdealError::Malformed(s);
        if doc.format_version != FORMAT_VERSION || doc.monomial_order != MONOMIAL_ORDER {
            return Err(bad("unsupported format version or monomial order".into()));
        }
        if doc.genus < 2 || doc.source_cap <= doc.genus {
            return Err(bad("invalid genus or cap".into()));
        }
        let mut pieces = vec![EchelonSpace::new(); doc.genus as usize + 1];
        for w in 0..=doc.genus {
            let wd = doc
                .weights
                .iter()
                .find(|x| x.w == w)
                .ok_or_else(|| bad(format!("missing weight {w}")))?;
            let mut rows = Vec::with_capacity(wd.relations.len());
            for rel in &wd.relations {
                let mut p = Poly::zero();
                for t in rel {
                    let m = parse_monomial(&t.monomial)
                        .ok_or_else(|| bad(format!("bad monomial {:?}", t.monomial)))?;
                    if m.weight() != w {
                        return Err(bad(format!("monomial {m} in weight {w}")));
                    }
                    let c = Rational::from_str(&t.coeff)
                        .map_err(|_| bad(format!("bad coefficient {:?}", t.coeff)))?;
                    p.add_term(m, c);
                }
                rows.push(p);
            }
            pieces[w as usize] = EchelonSpace::from_rref_rows(rows)
                .ok_or_else(|| bad(format!("weight {w} is not in reduced form")))?;
        }
        Ok(RelationIdeal {
            genus: doc.genus,
            source_cap: doc.source_cap,
            pieces,
        })
    }
}

fn parse_monomial(text: &str) -> Option<Monomial> {
    let p = parse_poly(text).ok()?;
    let (m, c) = p.leading()?;
    (p.len() == 1 && num_traits::One::is_one(c)).then(|| m.clone())
}

fn apply_all(op: &Operator, polys: &[Poly], exec: Exec) -> Vec<Poly> {
    exec.map(polys, |f| {
        op.apply(f).expect("closure inputs stay within the window")
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermDocument {
    pub monomial: String,
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightDocument {
    pub w: u32,
    pub quotient_dim: usize,
    pub relations: Vec<Vec<TermDocument>>,
}

/// Export schema for relation ideals.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealDocument {
    pub genus: u32,
    pub source_cap: u32,
    pub monomial_order: String,
    #[serde(rename = "format-version")]
    pub format_version: u32,
    pub weights: Vec<WeightDocument>,
}
