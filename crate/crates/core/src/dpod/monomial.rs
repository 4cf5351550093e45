//! Odd-degree monomial bases over the embedded real window.
//!
//! Monomials are identified by their sorted variable-index tuples
//! `(i_1 <= i_2 <= ... <= i_k)`. The canonical order is graded
//! lexicographic: ascending degree, then ascending tuple. For two variables
//! and degrees `{1, 3}` this gives `x1, x2, x1^3, x1^2 x2, x1 x2^2, x2^3`.

use alloc::vec;
use alloc::vec::Vec;

use super::memory::DegreeSet;
use crate::error::{Error, Result};

const ROOT: u32 = u32::MAX;

/// Tag written next to serialized coefficient vectors.
pub const BASIS_ORDER_TAG: &str = "graded-lex-sorted-index-tuples";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Node {
    parent: u32,
    var: u32,
    last: u32,
    degree: u32,
}

/// All monomials of the given odd degrees in `num_vars` real variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialBasis {
    num_vars: usize,
    degrees: DegreeSet,
    // every monomial of degree 1..=d, including the even degrees needed to
    // build the odd ones by a single multiplication
    nodes: Vec<Node>,
    outputs: Vec<u32>,
}

impl MonomialBasis {
    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn degrees(&self) -> DegreeSet {
        self.degrees
    }

    /// Number of basis monomials `P`.
    pub fn len(&self) -> usize {
        self.outputs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outputs.is_empty()
    }

    /// Size of the scratch buffer used by [`MonomialBasis::evaluate_into`].
    pub fn scratch_len(&self) -> usize {
        self.nodes.len()
    }

    /// Sorted variable indices of basis monomial `p`.
    pub fn index_tuple(&self, p: usize) -> Vec<usize> {
        let mut tuple = Vec::new();
        let mut node = self.outputs[p];
        while node != ROOT {
            let n = self.nodes[node as usize];
            tuple.push(n.var as usize);
            node = n.parent;
        }
        tuple.reverse();
        tuple
    }

    /// Exponent of each variable in basis monomial `p`.
    pub fn exponents(&self, p: usize) -> Vec<u32> {
        let mut e = vec![0u32; self.num_vars];
        for v in self.index_tuple(p) {
            e[v] += 1;
        }
        e
    }

    pub fn degree(&self, p: usize) -> usize {
        self.nodes[self.outputs[p] as usize].degree as usize
    }

    /// Evaluates all basis monomials at `y` into `out`, using `scratch` of
    /// length [`MonomialBasis::scratch_len`].
    #[inline]
    pub fn evaluate_into(&self, y: &[f64], scratch: &mut [f64], out: &mut [f64]) {
        debug_assert_eq!(y.len(), self.num_vars);
        for (i, node) in self.nodes.iter().enumerate() {
            let v = y[node.var as usize];
            scratch[i] = if node.parent == ROOT {
                v
            } else {
                scratch[node.parent as usize] * v
            };
        }
        for (o, &idx) in out.iter_mut().zip(&self.outputs) {
            *o = scratch[idx as usize];
        }
    }

    /// Monomial feature vector `a(y)` in basis order.
    pub fn features(&self, y: &[f64]) -> Result<Vec<f64>> {
        if y.len() != self.num_vars {
            return Err(Error::LengthMismatch {
                expected: self.num_vars,
                actual: y.len(),
            });
        }
        let mut scratch = vec![0.0; self.nodes.len()];
        let mut out = vec![0.0; self.outputs.len()];
        self.evaluate_into(y, &mut scratch, &mut out);
        Ok(out)
    }
}

/// Enumerates every monomial of total degree in `degrees` over `num_vars`
/// variables, in graded lexicographic order.
pub fn enumerate_monomials(num_vars: usize, degrees: DegreeSet) -> MonomialBasis {
    let mut nodes = Vec::new();
    let mut outputs = Vec::new();
    if num_vars > 0 {
        for v in 0..num_vars as u32 {
            nodes.push(Node {
                parent: ROOT,
                var: v,
                last: v,
                degree: 1,
            });
        }
        let mut level = 0..nodes.len();
        outputs.extend(level.clone().map(|i| i as u32));
        for degree in 2..=degrees.max_degree() as u32 {
            let start = nodes.len();
            for parent in level.clone() {
                let last = nodes[parent].last;
                for v in last..num_vars as u32 {
                    nodes.push(Node {
                        parent: parent as u32,
                        var: v,
                        last: v,
                        degree,
                    });
                }
            }
            level = start..nodes.len();
            if degrees.contains(degree as usize) {
                outputs.extend(level.clone().map(|i| i as u32));
            }
        }
    }
    MonomialBasis {
        num_vars,
        degrees,
        nodes,
        outputs,
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Closed-form basis size: `sum_{k in D} C(k + n - 1, k)`.
pub fn monomial_count(num_vars: usize, degrees: DegreeSet) -> usize {
    if num_vars == 0 {
        return 0;
    }
    degrees
        .iter()
        .map(|k| binomial((k + num_vars - 1) as u64, k as u64) as usize)
        .sum()
}
