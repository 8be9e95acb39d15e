//! The rational plane `Qγ ⊕ Qδ` with its fixed Gram form, and the handful of
//! rank-1 and rank-2 lattices living in it.
//!
//! Coordinates are always stored in the `(γ, δ)` basis. The form is
//! `<γ,γ> = 1/6`, `<δ,δ> = -1/6`, `<γ,δ> = 0`; it is indefinite, so both
//! `γ + δ` and `γ - δ` are null vectors.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{fmt_rational, parse_rational, q, qi, Rational};

/// An element `cγ·γ + cδ·δ` of the rational span of the lattice.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeVector {
    pub g: Rational,
    pub d: Rational,
}

impl LatticeVector {
    pub fn new(g: Rational, d: Rational) -> Self {
        Self { g, d }
    }

    /// Integer-coordinate shorthand, `ints(a, b) = aγ + bδ`.
    pub fn ints(g: i64, d: i64) -> Self {
        Self::new(qi(g), qi(d))
    }

    pub fn zero() -> Self {
        Self::ints(0, 0)
    }

    pub fn gamma() -> Self {
        Self::ints(1, 0)
    }

    pub fn delta() -> Self {
        Self::ints(0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.g.is_zero() && self.d.is_zero()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(&self.g * c, &self.d * c)
    }

    /// Coordinates in another basis `(b1, b2)` of the plane, if it is one.
    pub fn coordinates_in(&self, b1: &LatticeVector, b2: &LatticeVector) -> Option<(Rational, Rational)> {
        let det = &b1.g * &b2.d - &b2.g * &b1.d;
        if det.is_zero() {
            return None;
        }
        let x = (&self.g * &b2.d - &b2.g * &self.d) / &det;
        let y = (&b1.g * &self.d - &self.g * &b1.d) / &det;
        Some((x, y))
    }
}

impl Add for &LatticeVector {
    type Output = LatticeVector;
    fn add(self, rhs: &LatticeVector) -> LatticeVector {
        LatticeVector::new(&self.g + &rhs.g, &self.d + &rhs.d)
    }
}

impl Add for LatticeVector {
    type Output = LatticeVector;
    fn add(self, rhs: LatticeVector) -> LatticeVector {
        &self + &rhs
    }
}

impl Sub for &LatticeVector {
    type Output = LatticeVector;
    fn sub(self, rhs: &LatticeVector) -> LatticeVector {
        LatticeVector::new(&self.g - &rhs.g, &self.d - &rhs.d)
    }
}

impl Sub for LatticeVector {
    type Output = LatticeVector;
    fn sub(self, rhs: LatticeVector) -> LatticeVector {
        &self - &rhs
    }
}

impl Neg for &LatticeVector {
    type Output = LatticeVector;
    fn neg(self) -> LatticeVector {
        LatticeVector::new(-&self.g, -&self.d)
    }
}

impl Neg for LatticeVector {
    type Output = LatticeVector;
    fn neg(self) -> LatticeVector {
        -&self
    }
}

impl Mul<&LatticeVector> for i64 {
    type Output = LatticeVector;
    fn mul(self, rhs: &LatticeVector) -> LatticeVector {
        rhs.scale(&qi(self))
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*g + {}*d", fmt_rational(&self.g), fmt_rational(&self.d))
    }
}

impl FromStr for LatticeVector {
    type Err = Error;

    /// Accepts `a*g + b*d`, any subset of the two terms in any order, the
    /// juxtaposed shorthand `-6g`, and the literal `0`.
    fn from_str(s: &str) -> Result<Self> {
        let syntax = |pos: usize, msg: &str| Error::Syntax { pos, msg: msg.to_string() };
        let mut out = LatticeVector::zero();
        if s.trim() == "0" {
            return Ok(out);
        }
        let mut offset = 0;
        let mut seen_any = false;
        for piece in s.split('+') {
            let trimmed = piece.trim();
            let lead = piece.len() - piece.trim_start().len();
            let pos = offset + lead;
            offset += piece.len() + 1;
            if trimmed.is_empty() {
                return Err(syntax(pos, "empty term in lattice vector"));
            }
            let (coeff_text, basis) = match trimmed.char_indices().last() {
                Some((i, c @ ('g' | 'd'))) => (&trimmed[..i], c),
                _ => return Err(syntax(pos, "lattice term must end in `g` or `d`")),
            };
            let coeff_text = coeff_text.strip_suffix('*').unwrap_or(coeff_text).trim();
            let coeff = match coeff_text {
                "" => Rational::one(),
                "-" => -Rational::one(),
                t => parse_rational(t).ok_or_else(|| syntax(pos, "invalid rational coefficient"))?,
            };
            match basis {
                'g' => out.g += coeff,
                _ => out.d += coeff,
            }
            seen_any = true;
        }
        if !seen_any {
            return Err(syntax(0, "empty lattice vector"));
        }
        Ok(out)
    }
}

/// The symmetric bilinear form on the plane, as a 2x2 matrix over `(γ, δ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramForm {
    pub gg: Rational,
    pub gd: Rational,
    pub dd: Rational,
}

impl GramForm {
    /// The form used everywhere in this crate.
    pub fn standard() -> Self {
        Self { gg: q(1, 6), gd: Rational::zero(), dd: q(-1, 6) }
    }

    pub fn pair(&self, u: &LatticeVector, v: &LatticeVector) -> Rational {
        &self.gg * &u.g * &v.g + &self.gd * (&u.g * &v.d + &u.d * &v.g) + &self.dd * &u.d * &v.d
    }
}

/// `<u, v>` under the standard form.
pub fn pair(u: &LatticeVector, v: &LatticeVector) -> Rational {
    // Inlined standard form; this is on every hot path.
    (&u.g * &v.g - &u.d * &v.d) / qi(6)
}

/// Squared norm `<v, v>`.
pub fn norm(v: &LatticeVector) -> Rational {
    pair(v, v)
}

/// A lattice given by linearly independent generators (rank 1 or 2).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    pub name: String,
    pub generators: Vec<LatticeVector>,
}

impl Lattice {
    pub fn new(name: impl Into<String>, generators: Vec<LatticeVector>) -> Result<Self> {
        let name = name.into();
        let independent = match generators.as_slice() {
            [a] => !a.is_zero(),
            [a, b] => !(&a.g * &b.d - &b.g * &a.d).is_zero(),
            _ => false,
        };
        if !independent {
            return Err(Error::Config(format!("generators of {name} must be 1 or 2 independent vectors")));
        }
        Ok(Self { name, generators })
    }

    /// `L~ = Zγ + Zδ`.
    pub fn l_tilde() -> Self {
        Self::new("L~", vec![LatticeVector::gamma(), LatticeVector::delta()]).unwrap()
    }

    /// `L = Z(γ+δ) + Z(γ−δ)`.
    pub fn l() -> Self {
        Self::new("L", vec![LatticeVector::ints(1, 1), LatticeVector::ints(1, -1)]).unwrap()
    }

    /// `L0 = Z(3γ−3δ) + Z(3γ+3δ)`, the dual of `L`.
    pub fn l0() -> Self {
        Self::new("L0", vec![LatticeVector::ints(3, -3), LatticeVector::ints(3, 3)]).unwrap()
    }

    pub fn z_gamma() -> Self {
        Self::new("Zγ", vec![LatticeVector::gamma()]).unwrap()
    }

    pub fn z_delta() -> Self {
        Self::new("Zδ", vec![LatticeVector::delta()]).unwrap()
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    /// Rational coordinates of `v` in the generator basis, if `v` lies in the
    /// rational span.
    fn rational_coordinates(&self, v: &LatticeVector) -> Option<Vec<Rational>> {
        match self.generators.as_slice() {
            [a] => {
                // v = x·a requires v parallel to a.
                if !(&v.g * &a.d - &a.g * &v.d).is_zero() {
                    return None;
                }
                let x = if !a.g.is_zero() { &v.g / &a.g } else { &v.d / &a.d };
                Some(vec![x])
            }
            [a, b] => v.coordinates_in(a, b).map(|(x, y)| vec![x, y]),
            _ => None,
        }
    }

    /// Integer coordinates of `v` when it is a Z-combination of the generators.
    pub fn in_lattice(&self, v: &LatticeVector) -> Option<Vec<BigInt>> {
        let coords = self.rational_coordinates(v)?;
        if coords.iter().all(|c| c.is_integer()) {
            Some(coords.into_iter().map(|c| c.to_integer()).collect())
        } else {
            None
        }
    }

    pub fn contains(&self, v: &LatticeVector) -> bool {
        self.in_lattice(v).is_some()
    }

    /// `{v in span : <v, lat> ⊆ Z}`, returned as the dual basis of the
    /// generators.
    pub fn dual(&self) -> Result<Lattice> {
        let gens = &self.generators;
        let gram: Vec<Vec<Rational>> = gens.iter().map(|a| gens.iter().map(|b| pair(a, b)).collect()).collect();
        let dual = match gram.len() {
            1 => {
                if gram[0][0].is_zero() {
                    return Err(Error::Degenerate(self.name.clone()));
                }
                vec![gens[0].scale(&gram[0][0].recip())]
            }
            _ => {
                let det = &gram[0][0] * &gram[1][1] - &gram[0][1] * &gram[1][0];
                if det.is_zero() {
                    return Err(Error::Degenerate(self.name.clone()));
                }
                let inv = [[&gram[1][1] / &det, -&gram[0][1] / &det], [-&gram[1][0] / &det, &gram[0][0] / &det]];
                inv.iter().map(|row| &gens[0].scale(&row[0]) + &gens[1].scale(&row[1])).collect()
            }
        };
        Lattice::new(format!("{}*", self.name), dual)
    }

    /// Same Z-span, regardless of the chosen generators.
    pub fn same_lattice(&self, other: &Lattice) -> bool {
        self.rank() == other.rank()
            && other.generators.iter().all(|g| self.contains(g))
            && self.generators.iter().all(|g| other.contains(g))
    }
}
