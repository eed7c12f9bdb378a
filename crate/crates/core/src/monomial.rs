//! Monomials, monomial ideals and their behavior under monomial quadratic transforms.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MonomialError {
    #[error("a monomial ideal needs at least one generator")]
    EmptyGeneratorSet,
    #[error("expected dimension {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("direction {dir} out of range for dimension {dim}")]
    DirectionOutOfRange { dir: usize, dim: usize },
    #[error("exponent overflow")]
    ExponentOverflow,
}

/// Conventional parameter names: `x, y, z, w` up to dimension 4, else `x1, …, xd`.
pub fn variable_names(d: usize) -> Vec<String> {
    if d <= 4 {
        ["x", "y", "z", "w"][..d]
            .iter()
            .map(|s| s.to_string())
            .collect()
    } else {
        (1..=d).map(|i| format!("x{i}")).collect()
    }
}

fn check_dir(dir: usize, dim: usize) -> Result<(), MonomialError> {
    if dir < dim {
        Ok(())
    } else {
        Err(MonomialError::DirectionOutOfRange { dir, dim })
    }
}

/// An exponent vector in ℕ^d.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Monomial(Vec<u64>);

impl Monomial {
    pub fn new(exponents: Vec<u64>) -> Self {
        Monomial(exponents)
    }

    pub fn unit(d: usize) -> Self {
        Monomial(vec![0; d])
    }

    /// The `i`-th parameter as a monomial.
    pub fn var(d: usize, i: usize) -> Self {
        let mut e = vec![0; d];
        e[i] = 1;
        Monomial(e)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn exponents(&self) -> &[u64] {
        &self.0
    }

    pub fn total_degree(&self) -> u64 {
        self.0.iter().sum()
    }

    pub fn is_unit(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// True when `self` divides `other` (componentwise `<=`).
    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn mul(&self, other: &Monomial) -> Result<Monomial, MonomialError> {
        if self.dim() != other.dim() {
            return Err(MonomialError::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_add(*b).ok_or(MonomialError::ExponentOverflow))
            .collect::<Result<Vec<_>, _>>()
            .map(Monomial)
    }

    /// The same ring element written in the parameters after a step in `dir`:
    /// the `dir` exponent becomes the total degree.
    pub fn rewrite(&self, dir: usize) -> Result<Monomial, MonomialError> {
        check_dir(dir, self.dim())?;
        let deg = self
            .0
            .iter()
            .try_fold(0u64, |acc, &e| acc.checked_add(e))
            .ok_or(MonomialError::ExponentOverflow)?;
        let mut e = self.0.clone();
        e[dir] = deg;
        Ok(Monomial(e))
    }

    /// Renders with the given variable names, e.g. `x^2·y`.
    pub fn display_with(&self, names: &[String]) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                let name = names
                    .get(i)
                    .cloned()
                    .unwrap_or_else(|| format!("x{}", i + 1));
                if e == 1 {
                    name
                } else {
                    format!("{name}^{e}")
                }
            })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("·")
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&variable_names(self.dim())))
    }
}

/// A monomial ideal given by its unique minimal generating set, sorted lexicographically.
///
/// The unit ideal is `{(0, …, 0)}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct MonomialIdeal {
    #[serde(skip)]
    dim: usize,
    gens: Vec<Monomial>,
}

impl<'de> Deserialize<'de> for MonomialIdeal {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let gens = Vec::<Monomial>::deserialize(deserializer)?;
        MonomialIdeal::minimalize(gens).map_err(serde::de::Error::custom)
    }
}

impl MonomialIdeal {
    /// Drops every generator divisible by another one.
    pub fn minimalize<I>(gens: I) -> Result<Self, MonomialError>
    where
        I: IntoIterator<Item = Monomial>,
    {
        let mut gens: Vec<Monomial> = gens.into_iter().collect();
        let dim = gens.first().ok_or(MonomialError::EmptyGeneratorSet)?.dim();
        if let Some(bad) = gens.iter().find(|g| g.dim() != dim) {
            return Err(MonomialError::DimensionMismatch {
                expected: dim,
                found: bad.dim(),
            });
        }
        gens.sort_by(|a, b| {
            a.total_degree()
                .cmp(&b.total_degree())
                .then_with(|| a.cmp(b))
        });
        gens.dedup();
        let mut kept: Vec<Monomial> = Vec::with_capacity(gens.len());
        for g in gens {
            if !kept.iter().any(|k| k.divides(&g)) {
                kept.push(g);
            }
        }
        kept.sort();
        Ok(MonomialIdeal { dim, gens: kept })
    }

    pub fn unit(d: usize) -> Self {
        MonomialIdeal {
            dim: d,
            gens: vec![Monomial::unit(d)],
        }
    }

    /// The maximal ideal `(x, y, …, z)`.
    pub fn maximal(d: usize) -> Self {
        Self::minimalize((0..d).map(|i| Monomial::var(d, i))).expect("d >= 1")
    }

    pub fn principal(m: Monomial) -> Self {
        MonomialIdeal {
            dim: m.dim(),
            gens: vec![m],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[Monomial] {
        &self.gens
    }

    /// Minimum total degree of a generator.
    pub fn order(&self) -> u64 {
        self.gens
            .iter()
            .map(Monomial::total_degree)
            .min()
            .unwrap_or(0)
    }

    pub fn is_principal(&self) -> bool {
        self.gens.len() == 1
    }

    pub fn is_unit(&self) -> bool {
        self.gens.iter().any(Monomial::is_unit)
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.gens.iter().any(|g| g.divides(m))
    }

    pub fn is_subset_of(&self, other: &MonomialIdeal) -> bool {
        self.gens.iter().all(|g| other.contains(g))
    }

    /// The transform in the ring after one step in `dir`: rewrite, then
    /// divide out the new `dir` parameter to the power of the order.
    pub fn transform(&self, dir: usize) -> Result<MonomialIdeal, MonomialError> {
        check_dir(dir, self.dim)?;
        let r = self.order();
        let gens = self.gens.iter().map(|g| {
            let mut e = g.0.clone();
            e[dir] = g.total_degree() - r;
            Monomial(e)
        });
        Self::minimalize(gens)
    }

    /// The extension `I·R_j` along the word `dirs`.
    pub fn extend(&self, dirs: &[usize]) -> Result<MonomialIdeal, MonomialError> {
        let mut gens = self.gens.clone();
        for &dir in dirs {
            gens = gens
                .iter()
                .map(|g| g.rewrite(dir))
                .collect::<Result<Vec<_>, _>>()?;
            gens = Self::minimalize(gens)?.gens;
        }
        Ok(MonomialIdeal {
            dim: self.dim,
            gens,
        })
    }

    pub fn display_with(&self, names: &[String]) -> String {
        let parts: Vec<String> = self.gens.iter().map(|g| g.display_with(names)).collect();
        format!("({})", parts.join(", "))
    }
}

impl fmt::Display for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&variable_names(self.dim)))
    }
}

/// Cumulative exponent substitution `M_n = E_{dir_n} ⋯ E_{dir_1}`.
///
/// `E_dir` is the identity with row `dir` replaced by all ones. Column `j`
/// holds the exponents of the original parameter `x_j` written in the
/// current parameters, so the column sums are `ord_{R_n}(x_j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewriteMatrix {
    rows: Vec<Vec<BigUint>>,
}

impl RewriteMatrix {
    pub fn identity(d: usize) -> Self {
        let rows = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        if i == j {
                            BigUint::one()
                        } else {
                            BigUint::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        RewriteMatrix { rows }
    }

    pub fn from_word(d: usize, dirs: &[usize]) -> Result<Self, MonomialError> {
        let mut m = Self::identity(d);
        for &dir in dirs {
            m.step(dir)?;
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigUint {
        &self.rows[i][j]
    }

    pub fn rows(&self) -> &[Vec<BigUint>] {
        &self.rows
    }

    /// Left-multiplies by `E_dir`: row `dir` becomes the sum of all rows.
    pub fn step(&mut self, dir: usize) -> Result<(), MonomialError> {
        let d = self.dim();
        check_dir(dir, d)?;
        let sum: Vec<BigUint> = (0..d)
            .map(|j| self.rows.iter().map(|r| &r[j]).sum())
            .collect();
        self.rows[dir] = sum;
        Ok(())
    }

    /// `M · e`: the exponents of an original monomial in the current parameters.
    pub fn apply(&self, m: &Monomial) -> Vec<BigUint> {
        self.rows
            .iter()
            .map(|r| r.iter().zip(m.exponents()).map(|(a, &e)| a * e).sum())
            .collect()
    }

    /// `M · e` for an integer vector.
    pub fn apply_signed(&self, e: &[BigInt]) -> Vec<BigInt> {
        self.rows
            .iter()
            .map(|r| {
                r.iter()
                    .zip(e)
                    .map(|(a, x)| BigInt::from(a.clone()) * x)
                    .sum()
            })
            .collect()
    }

    pub fn column_sums(&self) -> Vec<BigUint> {
        let d = self.dim();
        (0..d)
            .map(|j| self.rows.iter().map(|r| &r[j]).sum())
            .collect()
    }

    /// `ord_{R_n}` of an original monomial: the total degree of `M · e`.
    pub fn order_of(&self, m: &Monomial) -> BigUint {
        self.column_sums()
            .iter()
            .zip(m.exponents())
            .map(|(w, &e)| w * e)
            .sum()
    }

    /// Exact determinant by fraction-free elimination.
    pub fn determinant(&self) -> BigInt {
        let d = self.dim();
        if d == 0 {
            return BigInt::one();
        }
        let mut a: Vec<Vec<BigInt>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(|x| BigInt::from(x.clone())).collect())
            .collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..d - 1 {
            if a[k][k].is_zero() {
                match (k + 1..d).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..d {
                for j in k + 1..d {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        sign * &a[d - 1][d - 1]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u64]) -> Monomial {
        Monomial::new(e.to_vec())
    }

    fn ideal(gs: &[&[u64]]) -> MonomialIdeal {
        MonomialIdeal::minimalize(gs.iter().map(|e| m(e))).unwrap()
    }

    #[test]
    fn degrees() {
        assert_eq!(m(&[2, 1]).total_degree(), 3);
        assert_eq!(m(&[0, 0]).total_degree(), 0);
        assert_eq!(m(&[0, 3, 1]).total_degree(), 4);
    }

    #[test]
    fn minimal_generators() {
        assert_eq!(
            ideal(&[&[1, 0], &[2, 0], &[0, 1]]).generators(),
            &[m(&[0, 1]), m(&[1, 0])]
        );
        assert_eq!(ideal(&[&[0, 0], &[5, 3]]), MonomialIdeal::unit(2));
        let m2 = ideal(&[&[2, 0], &[1, 1], &[0, 2]]);
        assert_eq!(m2.generators().len(), 3);
        assert_eq!(
            MonomialIdeal::minimalize(Vec::<Monomial>::new()),
            Err(MonomialError::EmptyGeneratorSet)
        );
        assert!(matches!(
            MonomialIdeal::minimalize([m(&[1]), m(&[1, 0])]),
            Err(MonomialError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn orders() {
        assert_eq!(ideal(&[&[1, 1], &[0, 2]]).order(), 2);
        assert_eq!(MonomialIdeal::unit(2).order(), 0);
        assert_eq!(ideal(&[&[2, 0], &[1, 1], &[0, 2]]).order(), 2);
    }

    #[test]
    fn transforms() {
        assert_eq!(
            ideal(&[&[1, 1], &[0, 2]]).transform(0).unwrap(),
            ideal(&[&[0, 1]])
        );
        assert_eq!(
            ideal(&[&[1, 0]]).transform(0).unwrap(),
            MonomialIdeal::unit(2)
        );
        assert_eq!(
            ideal(&[&[2, 0], &[1, 1], &[0, 2]]).transform(1).unwrap(),
            MonomialIdeal::unit(2)
        );
        assert_eq!(
            ideal(&[&[1, 0]]).transform(2),
            Err(MonomialError::DirectionOutOfRange { dir: 2, dim: 2 })
        );
    }

    #[test]
    fn rewrites() {
        assert_eq!(m(&[2, 1]).rewrite(0).unwrap(), m(&[3, 1]));
        assert_eq!(m(&[0, 0]).rewrite(1).unwrap(), m(&[0, 0]));
        assert_eq!(m(&[0, 1]).rewrite(0).unwrap(), m(&[1, 1]));
        assert_eq!(
            m(&[u64::MAX, 1]).rewrite(0),
            Err(MonomialError::ExponentOverflow)
        );
    }

    #[test]
    fn extensions() {
        assert_eq!(
            MonomialIdeal::maximal(2).extend(&[0]).unwrap(),
            ideal(&[&[1, 0]])
        );
        let i = ideal(&[&[2, 0], &[0, 1]]);
        assert_eq!(i.extend(&[]).unwrap(), i);
        let e1 = i.extend(&[0]).unwrap();
        assert_eq!(e1, ideal(&[&[2, 0], &[1, 1]]));
        assert!(!e1.is_principal());
        let e2 = i.extend(&[0, 1]).unwrap();
        assert_eq!(e2, ideal(&[&[1, 2]]));
        assert!(e2.is_principal());
    }

    #[test]
    fn membership() {
        let i = ideal(&[&[2, 0], &[0, 1]]);
        assert!(i.contains(&m(&[3, 0])) && i.contains(&m(&[0, 4])) && !i.contains(&m(&[1, 0])));
        assert!(ideal(&[&[2, 0], &[1, 1], &[0, 2]]).is_subset_of(&i));
        assert!(!i.is_subset_of(&ideal(&[&[2, 0], &[1, 1], &[0, 2]])));
    }

    #[test]
    fn rewrite_matrix() {
        let mut r = RewriteMatrix::identity(2);
        r.step(0).unwrap();
        r.step(1).unwrap();
        r.step(1).unwrap();
        assert_eq!(r.determinant(), BigInt::one());
        // ord(y)/ord(x) after [x, y, y] is the third ratio 4/3 of the √2 run.
        let w: Vec<u64> = r
            .column_sums()
            .iter()
            .map(|c| c.try_into().unwrap())
            .collect();
        assert_eq!(w, vec![3, 4]);
        let via = RewriteMatrix::from_word(2, &[0])
            .unwrap()
            .apply(&m(&[2, 1]));
        assert_eq!(via, vec![BigUint::from(3u32), BigUint::from(1u32)]);
        assert_eq!(
            RewriteMatrix::from_word(2, &[0, 1, 1])
                .unwrap()
                .order_of(&m(&[1, 1])),
            BigUint::from(7u32)
        );
    }

    #[test]
    fn determinant_general() {
        let r = RewriteMatrix {
            rows: vec![
                vec![0u32.into(), 2u32.into()],
                vec![3u32.into(), 1u32.into()],
            ],
        };
        assert_eq!(r.determinant(), BigInt::from(-6));
    }

    #[test]
    fn serde_forms() {
        let i = ideal(&[&[2, 0], &[0, 1]]);
        let s = serde_json::to_string(&i).unwrap();
        assert_eq!(s, "[[0,1],[2,0]]");
        let back: MonomialIdeal = serde_json::from_str("[[2,0],[3,0],[0,1]]").unwrap();
        assert_eq!(back, i);
        assert_eq!(i.to_string(), "(y, x^2)");
    }
}
