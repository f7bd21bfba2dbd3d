//! Exact incremental Gaussian elimination on sparse polynomials.
//!
//! Each row's pivot is its largest graded-lex monomial with coefficient 1.
//! Rows are kept in row-echelon form while inserting and brought to reduced
//! form by [`Echelon::finalize`], after which the basis is canonical for the
//! spanned subspace.
//!
//! Preimages are not stored densely. Every row operation is logged as a node
//! `P = base + Σ c_j P_j` over earlier nodes, and a witness is expanded from
//! that log only when asked for.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::polyring::{Monomial, Polynomial};
use crate::scalar::{Conductor, Scalar};

#[derive(Debug, Clone)]
struct Row {
    vector: Polynomial,
    /// Node holding the preimage of `vector` (tracked mode only).
    node: usize,
}

/// `preimage = base + Σ c·preimage(node)`, with every referenced node older.
#[derive(Debug, Clone)]
struct Node {
    base: Option<Polynomial>,
    refs: Vec<(usize, Scalar)>,
}

/// A subspace of `K[x]` together with preimages of its basis vectors.
#[derive(Debug, Clone)]
pub struct Echelon {
    field: Arc<Conductor>,
    nvars: usize,
    rows: Vec<Row>,
    pivots: BTreeMap<Monomial, usize>,
    nodes: Vec<Node>,
    kernel_nodes: Vec<usize>,
    kernel_dim: usize,
    inserted: usize,
    track: bool,
    reduced: bool,
}

/// Outcome of reducing a vector against an [`Echelon`].
#[derive(Debug, Clone)]
pub struct Reduction {
    pub residue: Polynomial,
    /// Preimage of `query − residue`, when witnesses are tracked.
    pub witness: Option<Polynomial>,
}

impl Echelon {
    pub fn new(field: &Arc<Conductor>, nvars: usize, track_witnesses: bool) -> Echelon {
        Echelon {
            field: Arc::clone(field),
            nvars,
            rows: Vec::new(),
            pivots: BTreeMap::new(),
            nodes: Vec::new(),
            kernel_nodes: Vec::new(),
            kernel_dim: 0,
            inserted: 0,
            track: track_witnesses,
            reduced: true,
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Number of inserted vectors that were dependent on earlier ones.
    pub fn kernel_dim(&self) -> usize {
        self.kernel_dim
    }

    /// Preimage combinations mapping to zero (tracked mode only).
    pub fn kernel(&self) -> Vec<Polynomial> {
        self.kernel_nodes
            .iter()
            .map(|&k| self.expand(std::iter::once((k, Scalar::one(&self.field)))))
            .collect()
    }

    pub fn inserted(&self) -> usize {
        self.inserted
    }

    pub fn tracks_witnesses(&self) -> bool {
        self.track
    }

    /// Residue of `v` and the `(row, coefficient)` combination subtracted.
    fn reduce_raw(&self, v: &Polynomial) -> (Polynomial, Vec<(usize, Scalar)>) {
        let mut residue = v.clone();
        let mut used = Vec::new();
        let mut cursor: Option<Monomial> = None;
        loop {
            // largest pivot monomial of the residue strictly below the cursor
            let next = residue
                .terms()
                .filter(|(m, _)| cursor.as_ref().is_none_or(|c| *m < c))
                .find_map(|(m, c)| self.pivots.get(m).map(|&i| (m.clone(), c.clone(), i)));
            let Some((m, c, i)) = next else { break };
            residue.add_scaled(&-&c, &self.rows[i].vector);
            used.push((i, c));
            cursor = Some(m);
        }
        (residue, used)
    }

    /// Preimage of `Σ w·(node)`, by pushing weights from newer to older nodes.
    fn expand(&self, start: impl IntoIterator<Item = (usize, Scalar)>) -> Polynomial {
        let mut weights: Vec<Option<Scalar>> = vec![None; self.nodes.len()];
        let mut top = 0;
        for (k, c) in start {
            top = top.max(k + 1);
            match &mut weights[k] {
                Some(w) => *w += &c,
                slot => *slot = Some(c),
            }
        }
        let mut out = Polynomial::zero(&self.field, self.nvars);
        for k in (0..top).rev() {
            let Some(w) = weights[k].take() else { continue };
            if w.is_zero() {
                continue;
            }
            let node = &self.nodes[k];
            if let Some(b) = &node.base {
                out.add_scaled(&w, b);
            }
            for (j, c) in &node.refs {
                let add = &w * c;
                match &mut weights[*j] {
                    Some(x) => *x += &add,
                    slot => *slot = Some(add),
                }
            }
        }
        out
    }

    /// Fully reduces `v`: the residue contains no pivot monomial.
    pub fn reduce(&self, v: &Polynomial) -> Reduction {
        let (residue, used) = self.reduce_raw(v);
        let witness = self
            .track
            .then(|| self.expand(used.into_iter().map(|(i, c)| (self.rows[i].node, c))));
        Reduction { residue, witness }
    }

    /// Inserts `v` with preimage `pre` (ignored unless tracking); returns
    /// whether the rank grew.
    pub fn insert(&mut self, v: &Polynomial, pre: Option<&Polynomial>) -> bool {
        self.inserted += 1;
        let (residue, used) = self.reduce_raw(v);
        let lead = residue
            .leading()
            .map(|(m, c)| (m.clone(), c.inv().expect("nonzero leading coefficient")));
        let node = if self.track {
            let pre = pre.expect("tracked echelon needs a preimage for every insert");
            // residue = v − Σ c·row, scaled by 1/lead when it becomes a row
            let scale = lead
                .as_ref()
                .map_or_else(|| Scalar::one(&self.field), |(_, inv)| inv.clone());
            let refs = used.iter().map(|(i, c)| (self.rows[*i].node, -&(c * &scale))).collect();
            self.nodes.push(Node {
                base: Some(pre.scale(&scale)),
                refs,
            });
            self.nodes.len() - 1
        } else {
            0
        };
        let Some((lead, inv)) = lead else {
            self.kernel_dim += 1;
            if self.track {
                self.kernel_nodes.push(node);
            }
            return false;
        };
        self.pivots.insert(lead, self.rows.len());
        self.rows.push(Row {
            vector: residue.scale(&inv),
            node,
        });
        self.reduced = false;
        true
    }

    /// Back-substitution: clears every pivot from every other row.
    pub fn finalize(&mut self) {
        if self.reduced {
            return;
        }
        let order: Vec<usize> = self.pivots.values().copied().collect();
        // ascending pivots: a row's tail only meets smaller pivots, whose
        // rows are already reduced
        for &i in &order {
            let hits: Vec<(usize, Scalar)> = self.rows[i]
                .vector
                .terms()
                .skip(1)
                .filter_map(|(m, c)| self.pivots.get(m).map(|&j| (j, c.clone())))
                .collect();
            if hits.is_empty() {
                continue;
            }
            let mut vector = self.rows[i].vector.clone();
            for (j, c) in &hits {
                vector.add_scaled(&-c, &self.rows[*j].vector);
            }
            if self.track {
                let mut refs = vec![(self.rows[i].node, Scalar::one(&self.field))];
                refs.extend(hits.iter().map(|(j, c)| (self.rows[*j].node, -c)));
                self.nodes.push(Node { base: None, refs });
                self.rows[i].node = self.nodes.len() - 1;
            }
            self.rows[i].vector = vector;
        }
        self.reduced = true;
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    /// `(pivot, vector)` with pivots descending.
    pub fn basis(&self) -> impl Iterator<Item = (&Monomial, &Polynomial)> + '_ {
        self.pivots.iter().rev().map(|(m, &i)| (m, &self.rows[i].vector))
    }

    /// Like [`Echelon::basis`], restricted to pivots accepted by `keep`, with
    /// each vector's preimage when tracked.
    pub fn basis_with_preimages(
        &self,
        keep: impl Fn(&Monomial) -> bool,
    ) -> Vec<(&Monomial, &Polynomial, Option<Polynomial>)> {
        self.pivots
            .iter()
            .rev()
            .filter(|(m, _)| keep(m))
            .map(|(m, &i)| {
                let r = &self.rows[i];
                let pre = self
                    .track
                    .then(|| self.expand(std::iter::once((r.node, Scalar::one(&self.field)))));
                (m, &r.vector, pre)
            })
            .collect()
    }

    pub fn pivot_monomials(&self) -> impl DoubleEndedIterator<Item = &Monomial> + '_ {
        self.pivots.keys()
    }

    pub fn contains_pivot(&self, m: &Monomial) -> bool {
        self.pivots.contains_key(m)
    }

    /// Basis vectors whose pivot has degree at most `d`, pivots descending.
    pub fn vectors_up_to(&self, d: u32) -> Vec<Polynomial> {
        self.basis()
            .filter(|(m, _)| m.degree() <= d)
            .map(|(_, v)| v.clone())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::parse_polynomial;

    fn p(s: &str, k: &Arc<Conductor>) -> Polynomial {
        parse_polynomial(s, 2, k).unwrap()
    }

    #[test]
    fn reduced_form_is_canonical() {
        let k = Conductor::new(1).unwrap();
        let mut a = Echelon::new(&k, 2, true);
        for (v, pre) in [("x1 + x2", "x1"), ("x1 - x2", "x2"), ("2*x1", "x1")] {
            a.insert(&p(v, &k), Some(&p(pre, &k)));
        }
        a.finalize();
        let basis: Vec<String> = a.basis().map(|(_, v)| v.to_string()).collect();
        assert_eq!(basis, ["x1", "x2"]);
        // 2x1 is the sum of the first two, so x1 - (x1 + x2) labels the kernel
        assert_eq!(a.kernel(), vec![p("-x2", &k)]);
        let pre: Vec<String> = a
            .basis_with_preimages(|_| true)
            .into_iter()
            .map(|(_, _, w)| w.unwrap().to_string())
            .collect();
        assert_eq!(pre, ["1/2*x1 + 1/2*x2", "1/2*x1 - 1/2*x2"]);
    }

    #[test]
    fn reduction_records_witness() {
        let k = Conductor::new(1).unwrap();
        let mut e = Echelon::new(&k, 2, true);
        e.insert(&p("x1^2 + x2", &k), Some(&p("x1", &k)));
        e.insert(&p("x2 + 1", &k), Some(&p("x2", &k)));
        let r = e.reduce(&p("x1^2 - 1", &k));
        assert!(r.residue.is_zero());
        assert_eq!(r.witness.unwrap(), p("x1 - x2", &k));
        let r = e.reduce(&p("x1^2", &k));
        assert_eq!(r.residue, p("1", &k));
        e.finalize();
        let r = e.reduce(&p("x1^2 - 1", &k));
        assert_eq!(r.witness.unwrap(), p("x1 - x2", &k));
    }
}
