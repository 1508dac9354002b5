use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{AlgebraError, ChoiceAssignment, DeltaPoly, MwpScalar};

/// Square matrix of [`DeltaPoly`] entries; entry `(i, j)` is the flow from
/// variable `i` into the new value of variable `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MwpMatrix {
    vars: Vec<String>,
    entries: Vec<DeltaPoly>,
}

/// Evaluated matrix, `rows[i][j]` as in [`MwpMatrix`].
pub type ScalarMatrix = Vec<Vec<MwpScalar>>;

impl MwpMatrix {
    pub fn zero(vars: Vec<String>) -> MwpMatrix {
        let n = vars.len();
        MwpMatrix {
            vars,
            entries: vec![DeltaPoly::zero(); n * n],
        }
    }

    pub fn identity(vars: Vec<String>) -> MwpMatrix {
        let mut m = MwpMatrix::zero(vars);
        for i in 0..m.dim() {
            m.set(i, i, DeltaPoly::constant(MwpScalar::M));
        }
        m
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn dim(&self) -> usize {
        self.vars.len()
    }

    pub fn index_of(&self, var: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == var)
    }

    pub fn get(&self, i: usize, j: usize) -> &DeltaPoly {
        &self.entries[i * self.dim() + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: DeltaPoly) {
        let n = self.dim();
        self.entries[i * n + j] = p;
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut DeltaPoly {
        let n = self.dim();
        &mut self.entries[i * n + j]
    }

    pub fn column(&self, j: usize) -> Vec<DeltaPoly> {
        (0..self.dim()).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn set_column(&mut self, j: usize, col: Vec<DeltaPoly>) {
        debug_assert_eq!(col.len(), self.dim());
        for (i, p) in col.into_iter().enumerate() {
            self.set(i, j, p);
        }
    }

    /// Column `j` is exactly the unit vector `M·e_j`.
    pub fn is_unit_column(&self, j: usize) -> bool {
        (0..self.dim()).all(|i| {
            if i == j {
                self.get(i, j).is_constant(MwpScalar::M)
            } else {
                self.get(i, j).is_zero()
            }
        })
    }

    pub fn is_identity(&self) -> bool {
        (0..self.dim()).all(|j| self.is_unit_column(j))
    }

    /// All choice-point indices mentioned by any entry.
    pub fn indices(&self) -> BTreeSet<u32> {
        self.entries.iter().flat_map(|p| p.indices()).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &DeltaPoly)> {
        let n = self.dim();
        self.entries
            .iter()
            .enumerate()
            .map(move |(k, p)| (k / n, k % n, p))
    }

    fn check_vars(&self, other: &MwpMatrix) -> Result<(), AlgebraError> {
        if self.vars != other.vars {
            return Err(AlgebraError::VarMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &MwpMatrix) -> Result<MwpMatrix, AlgebraError> {
        self.check_vars(other)?;
        Ok(MwpMatrix {
            vars: self.vars.clone(),
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.add(b))
                .collect(),
        })
    }

    pub fn mul(&self, other: &MwpMatrix) -> Result<MwpMatrix, AlgebraError> {
        self.check_vars(other)?;
        let n = self.dim();
        let mut out = MwpMatrix::zero(self.vars.clone());
        for j in 0..n {
            if other.is_unit_column(j) {
                for i in 0..n {
                    out.set(i, j, self.get(i, j).clone());
                }
                continue;
            }
            let col = other.column(j);
            out.set_column(j, self.apply_to_column(&col));
        }
        Ok(out)
    }

    /// `self · v` for a column vector `v`.
    pub fn apply_to_column(&self, v: &[DeltaPoly]) -> Vec<DeltaPoly> {
        let n = self.dim();
        let support: Vec<usize> = (0..n).filter(|&k| !v[k].is_zero()).collect();
        (0..n)
            .map(|i| {
                let terms: Vec<DeltaPoly> = support
                    .iter()
                    .filter(|&&k| !self.get(i, k).is_zero())
                    .map(|&k| self.get(i, k).mul(&v[k]))
                    .collect();
                DeltaPoly::sum(terms)
            })
            .collect()
    }

    /// Kleene closure by iterating `X ← I + A·X` from `X = I` to equality.
    pub fn star(&self) -> Result<MwpMatrix, AlgebraError> {
        let id = MwpMatrix::identity(self.vars.clone());
        let cap = 2 * self.dim().max(1) * (self.indices().len() + 1) * 5;
        let mut x = id.clone();
        for _ in 0..cap {
            let next = id.add(&self.mul(&x)?)?;
            if next == x {
                return Ok(x);
            }
            x = next;
        }
        Err(AlgebraError::StarDiverged { iterations: cap })
    }

    /// Same closure as [`MwpMatrix::star`], computed only over the variables
    /// whose columns are not unit vectors. Rows of untouched variables are
    /// obtained by one product with the restricted closure.
    pub fn star_sparse(&self) -> Result<MwpMatrix, AlgebraError> {
        let n = self.dim();
        let active: Vec<usize> = (0..n).filter(|&j| !self.is_unit_column(j)).collect();
        if active.is_empty() {
            return Ok(MwpMatrix::identity(self.vars.clone()));
        }
        let sub_vars: Vec<String> = active.iter().map(|&k| self.vars[k].clone()).collect();
        let mut sub = MwpMatrix::zero(sub_vars);
        for (a, &i) in active.iter().enumerate() {
            for (b, &j) in active.iter().enumerate() {
                sub.set(a, b, self.get(i, j).clone());
            }
        }
        let closed = sub.star()?;
        let mut out = MwpMatrix::identity(self.vars.clone());
        let is_active: Vec<Option<usize>> = (0..n)
            .map(|k| active.iter().position(|&a| a == k))
            .collect();
        for (b, &j) in active.iter().enumerate() {
            for r in 0..n {
                let entry = match is_active[r] {
                    Some(a) => closed.get(a, b).clone(),
                    None => {
                        let mut acc = DeltaPoly::zero();
                        for (c, &k) in active.iter().enumerate() {
                            let lhs = self.get(r, k);
                            if !lhs.is_zero() {
                                acc.add_assign(&lhs.mul(closed.get(c, b)));
                            }
                        }
                        acc
                    }
                };
                out.set(r, j, entry);
            }
        }
        Ok(out)
    }

    pub fn eval(&self, sigma: &ChoiceAssignment) -> Result<ScalarMatrix, AlgebraError> {
        let n = self.dim();
        let mut rows = vec![vec![MwpScalar::O; n]; n];
        for (i, j, p) in self.entries() {
            rows[i][j] = p.eval(sigma)?;
        }
        Ok(rows)
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    vars: Vec<String>,
    entries: Vec<Vec<DeltaPoly>>,
}

impl Serialize for MwpMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let n = self.dim();
        MatrixRepr {
            vars: self.vars.clone(),
            entries: (0..n)
                .map(|i| (0..n).map(|j| self.get(i, j).clone()).collect())
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for MwpMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = MatrixRepr::deserialize(d)?;
        let n = repr.vars.len();
        if repr.entries.len() != n || repr.entries.iter().any(|r| r.len() != n) {
            return Err(serde::de::Error::custom(
                "matrix is not square over its vars",
            ));
        }
        Ok(MwpMatrix {
            vars: repr.vars,
            entries: repr.entries.into_iter().flatten().collect(),
        })
    }
}
