//! The invariant frame of the Φ3 equivalence problem: fundamental invariants
//! I1, I2, I3 and invariant derivations X1…X4 over (x, y, p, a).
//!
//! Sign convention: `I1 = f_p²/4 + f_y − D_x f_p / 2`,
//! `I2 = −f_ppp/(2a²)` and `I3 = −(f_yp − D_x f_pp)/(2a)`. With this choice
//! `X1(X3(I1))` on `y'' = p/x + 4y²/x³` equals `8/(a x³)`.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::expr::{jet_var, q, Base, Derivation, Expr, Point, Poly, TotalDerivative, VarId, Q};
use crate::odeparse::InvariantToken;

/// Partial derivative in x, y or p that also shifts jet symbols of f.
struct JetPartial(VarId);

impl Derivation for JetPartial {
    fn image(&self, v: &VarId) -> Result<Option<Expr>> {
        match v {
            VarId::Jet(j) => {
                let (x, y, p) = (j.x as u32, j.y as u32, j.p as u32);
                let shifted = match self.0 {
                    VarId::X => jet_var(x + 1, y, p)?,
                    VarId::Y => jet_var(x, y + 1, p)?,
                    _ => jet_var(x, y, p + 1)?,
                };
                Ok(Some(Expr::var(shifted)))
            }
            _ => Ok((v == &self.0).then(Expr::one)),
        }
    }
}

fn dp(e: &Expr) -> Result<Expr> {
    e.derive(&JetPartial(VarId::P))
}

fn dy(e: &Expr) -> Result<Expr> {
    e.derive(&JetPartial(VarId::Y))
}

/// One of the invariant derivations X1…X4 for a given right-hand side.
pub struct FrameDerivation {
    k: u8,
    fp: Expr,
    fpp: Expr,
    dx: TotalDerivative,
}

impl FrameDerivation {
    pub fn new(k: u8, f: &Expr) -> Result<FrameDerivation> {
        if !(1..=4).contains(&k) {
            return Err(Error::Unsupported(format!("invariant derivation X{k}")));
        }
        let fp = dp(f)?;
        let fpp = dp(&fp)?;
        Ok(FrameDerivation {
            k,
            fp,
            fpp,
            dx: TotalDerivative::new(f.clone()),
        })
    }
}

impl Derivation for FrameDerivation {
    fn image(&self, v: &VarId) -> Result<Option<Expr>> {
        let a = Expr::a();
        let inv_a = a.inv()?;
        let half = Expr::frac(1, 2);
        let img = match (self.k, v) {
            (_, VarId::Token(_)) => None,
            (1, VarId::Base(Base::P)) => Some(inv_a),
            (1, VarId::Jet(_)) => Some(&inv_a * JetPartial(VarId::P).image(v)?.expect("jet")),
            (2, VarId::Base(Base::Y)) => Some(inv_a),
            (2, VarId::Base(Base::P)) => Some(&half * &self.fp * &inv_a),
            (2, VarId::Base(Base::A)) => Some(-(&half * &self.fpp)),
            (2, VarId::Jet(_)) => {
                let jy = JetPartial(VarId::Y).image(v)?.expect("jet");
                let jp = JetPartial(VarId::P).image(v)?.expect("jet");
                Some(&inv_a * jy + &half * &self.fp * &inv_a * jp)
            }
            (3, VarId::Base(Base::A)) => Some(-(&half * &self.fp * &a)),
            (3, _) => self.dx.image(v)?,
            (4, VarId::Base(Base::A)) => Some(a),
            _ => None,
        };
        Ok(img)
    }
}

/// I1, I2 or I3 for the right-hand side `f` (a jet symbol or a concrete Expr).
pub fn fundamental(base: u8, f: &Expr) -> Result<Expr> {
    let dx = TotalDerivative::new(f.clone());
    let a = Expr::a();
    let fp = dp(f)?;
    match base {
        1 => {
            let fy = dy(f)?;
            Ok(Expr::frac(1, 4) * fp.pow(2) + fy - Expr::frac(1, 2) * fp.derive(&dx)?)
        }
        2 => {
            let fppp = dp(&dp(&fp)?)?;
            Ok(-(fppp / (Expr::int(2) * a.pow(2))))
        }
        3 => {
            let fpp = dp(&fp)?;
            let fyp = dy(&fp)?;
            Ok(-((fyp - fpp.derive(&dx)?) / (Expr::int(2) * a)))
        }
        _ => Err(Error::Unsupported(format!("fundamental invariant I{base}"))),
    }
}

/// A token together with its value on a particular right-hand side.
#[derive(Clone, Debug, PartialEq)]
pub struct SpecializedInvariant {
    pub token: InvariantToken,
    pub value: Expr,
}

/// Specializes tokens on one right-hand side, sharing work between words with
/// common prefixes.
pub struct Specializer {
    f: Expr,
    derivations: Vec<FrameDerivation>,
    cache: HashMap<InvariantToken, Expr>,
}

impl Specializer {
    pub fn new(f: &Expr) -> Result<Specializer> {
        let derivations = (1..=4)
            .map(|k| FrameDerivation::new(k, f))
            .collect::<Result<_>>()?;
        Ok(Specializer {
            f: f.clone(),
            derivations,
            cache: HashMap::new(),
        })
    }

    pub fn rhs(&self) -> &Expr {
        &self.f
    }

    pub fn value(&mut self, token: &InvariantToken) -> Result<Expr> {
        if let Some(v) = self.cache.get(token) {
            return Ok(v.clone());
        }
        let v = match token {
            InvariantToken::Essential => Expr::x(),
            InvariantToken::Word { base, word } => match word.split_last() {
                None => fundamental(*base, &self.f)?,
                Some((k, prefix)) => {
                    let inner = InvariantToken::Word {
                        base: *base,
                        word: prefix.to_vec(),
                    };
                    let inner = self.value(&inner)?;
                    let d = self
                        .derivations
                        .get((*k as usize).wrapping_sub(1))
                        .ok_or_else(|| Error::Unsupported(format!("invariant derivation X{k}")))?;
                    inner.derive(d)?
                }
            },
        };
        self.cache.insert(token.clone(), v.clone());
        Ok(v)
    }

    /// Substitutes specialized values for every invariant token in `e`.
    pub fn expr(&mut self, e: &Expr) -> Result<Expr> {
        let mut b = HashMap::new();
        for v in e.vars() {
            if let Some(t) = InvariantToken::from_var(&v) {
                b.insert(v, self.value(&t)?);
            }
        }
        e.substitute(&b)
    }
}

pub fn specialize(token: &InvariantToken, f: &Expr) -> Result<SpecializedInvariant> {
    let value = Specializer::new(f)?.value(token)?;
    Ok(SpecializedInvariant {
        token: token.clone(),
        value,
    })
}

/// The derivations X1…X4 acting on invariant tokens: `X_k(I_w) = I_{wk}`,
/// and on the essential invariant `X_k(X) = 1` for k = 3, else 0.
pub struct TokenDerivation(pub u8);

impl Derivation for TokenDerivation {
    fn image(&self, v: &VarId) -> Result<Option<Expr>> {
        match InvariantToken::from_var(v) {
            Some(InvariantToken::Essential) => Ok((self.0 == 3).then(Expr::one)),
            Some(t) => Ok(t.extended(self.0).map(|t| t.expr())),
            None => match v {
                VarId::Base(Base::X) => Ok((self.0 == 3).then(Expr::one)),
                VarId::Token(_) => Ok(None),
                _ => Err(Error::Unsupported(format!("X{} applied to {v}", self.0))),
            },
        }
    }
}

/// Solves `lhs = target` for the parameter a, where `lhs` is a rational
/// expression in invariant tokens specialized on `f`.
pub fn normalize_parameter(lhs: &Expr, target: &Expr, f: &Expr) -> Result<Expr> {
    let mut s = Specializer::new(f)?;
    let eq = s.expr(lhs)? - target;
    solve_for_parameter(&eq)
}

fn solve_linear(num: &Poly, v: &VarId) -> Option<Expr> {
    if num.degree_in(v) != 1 {
        return None;
    }
    let c = num.coeffs_in(v);
    Some(-(Expr::from_poly(c[0].clone()) / Expr::from_poly(c[1].clone())))
}

/// The value of a making `eq` vanish, when `eq` is linear in a or in 1/a.
pub fn solve_for_parameter(eq: &Expr) -> Result<Expr> {
    let a = VarId::A;
    if !eq.contains_var(&a) {
        return Err(Error::ParameterAbsent);
    }
    if let Some(v) = solve_linear(eq.num(), &a) {
        if !v.is_zero() {
            return Ok(v);
        }
    }
    // try b = 1/a
    let b = VarId::token("B");
    let flipped = eq.substitute_one(&a, &(Expr::one() / Expr::var(b.clone())))?;
    match solve_linear(flipped.num(), &b) {
        Some(v) if !v.is_zero() => v.inv(),
        _ => Err(Error::NotLinearInParameter),
    }
}

/// Whether three functions of (x, y, p) have a non-vanishing Jacobian.
/// The symbolic determinant decides; seeded random evaluations cross-check.
pub fn functionally_independent(values: &[Expr; 3]) -> Result<bool> {
    let coords = [VarId::X, VarId::Y, VarId::P];
    let m: Vec<Vec<Expr>> = values
        .iter()
        .map(|v| coords.iter().map(|c| v.diff(c)).collect())
        .collect();
    let det = &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1])
        - &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
        + &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0]);
    let symbolic = !det.is_zero();
    let nonzero_samples = sample_nonzero(&det, 20);
    debug_assert!(symbolic || nonzero_samples == 0);
    Ok(symbolic)
}

/// Number of nonzero values of `e` at `n` seeded random points with
/// coordinates in [−10, 10], skipping poles.
pub fn sample_nonzero(e: &Expr, n: usize) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0de9);
    let mut hits = 0;
    let mut tried = 0;
    let mut attempts = 0;
    while tried < n && attempts < 50 * n {
        attempts += 1;
        let mut pt = Point::new();
        for v in e.vars() {
            let num: i64 = rng.gen_range(-100..=100);
            let den: i64 = rng.gen_range(1..=10);
            pt.insert(v, Q::new(num.into(), den.into()));
        }
        match e.eval_at(&pt) {
            Ok(val) => {
                tried += 1;
                if val != q(0) {
                    hits += 1;
                }
            }
            Err(_) => continue,
        }
    }
    hits
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::odeparse::{parse_invariant_token, parse_rhs};

    fn tok(s: &str) -> InvariantToken {
        parse_invariant_token(s).unwrap()
    }

    fn rhs(s: &str) -> Expr {
        parse_rhs(s).unwrap()
    }

    fn val(t: &str, f: &str) -> Expr {
        specialize(&tok(t), &rhs(f)).unwrap().value
    }

    #[test]
    fn first_invariant_examples() {
        assert_eq!(val("I1", "6*y^2 + x"), Expr::int(12) * Expr::y());
        assert_eq!(val("I1", "x*y"), Expr::x());
    }

    #[test]
    fn reid_words() {
        let f = "y'/x + 4*y^2/x^3";
        let (x, a) = (Expr::x(), Expr::a());
        assert_eq!(val("I1_31", f), Expr::int(8) / (&a * x.pow(3)));
        assert_eq!(val("I1_23", f), Expr::int(-20) / (&a * x.pow(4)));
    }

    #[test]
    fn rayleigh_values() {
        let f = "-y'^4 - y";
        let (y, p, a) = (Expr::y(), Expr::p(), Expr::a());
        assert_eq!(val("I2", f), Expr::int(12) * &p / a.pow(2));
        assert_eq!(val("I2_1", f), Expr::int(12) / a.pow(3));
        let i1 = -(Expr::int(2) * p.pow(6) + Expr::int(6) * p.pow(2) * &y + Expr::one());
        assert_eq!(val("I1", f), i1);
    }

    #[test]
    fn emden_values() {
        let f = "1/(x*y^2)";
        let (x, y, p, a) = (Expr::x(), Expr::y(), Expr::p(), Expr::a());
        assert_eq!(val("I1", f), Expr::int(-2) / (&x * y.pow(3)));
        let i13 = Expr::int(2) * (Expr::int(3) * &p * &x + &y) / (x.pow(2) * y.pow(4));
        assert_eq!(val("I1_3", f), i13);
        assert_eq!(val("I1_31", f), Expr::int(6) / (&a * &x * y.pow(4)));
        assert!(val("I1_1", f).is_zero());
        assert!(val("I1_13", f).is_zero());
    }

    #[test]
    fn homogeneity_in_a() {
        let f = Expr::var(VarId::F);
        let x4 = FrameDerivation::new(4, &f).unwrap();
        let i2 = fundamental(2, &f).unwrap();
        let i3 = fundamental(3, &f).unwrap();
        assert_eq!(i2.derive(&x4).unwrap(), Expr::int(-2) * &i2);
        assert_eq!(i3.derive(&x4).unwrap(), -i3);
        for g in ["y'^2*x + y", "x*y*y' - 3", "y^3 + x*y"] {
            let g = rhs(g);
            assert!(fundamental(2, &g).unwrap().is_zero());
            let x4 = FrameDerivation::new(4, &g).unwrap();
            let i3 = fundamental(3, &g).unwrap();
            assert_eq!(i3.derive(&x4).unwrap(), -i3);
        }
    }

    #[test]
    fn symbolic_and_concrete_frames_agree() {
        let g = rhs("y'^3/x + y^2*y'");
        let sym = fundamental(1, &Expr::var(VarId::F)).unwrap();
        let concrete = crate::expr::specialize_jets(&sym, &g).unwrap();
        assert_eq!(concrete, fundamental(1, &g).unwrap());
    }

    #[test]
    fn parameter_normalization() {
        let reid = rhs("y'/x + 4*y^2/x^3");
        let a = normalize_parameter(&tok("I1_23").expr(), &Expr::int(-20), &reid).unwrap();
        assert_eq!(a, Expr::one() / Expr::x().pow(4));
        let ray = rhs("-y'^4 - y");
        let ratio = tok("I2").expr() / tok("I2_1").expr();
        let a = normalize_parameter(&ratio, &Expr::one(), &ray).unwrap();
        assert_eq!(a, Expr::one() / Expr::p());
        assert_eq!(
            normalize_parameter(&tok("I1").expr(), &Expr::zero(), &ray),
            Err(Error::ParameterAbsent)
        );
        let quad = Expr::a().pow(2) + Expr::one() + Expr::one() / Expr::a().pow(2);
        assert_eq!(solve_for_parameter(&quad), Err(Error::NotLinearInParameter));
    }

    #[test]
    fn independence() {
        let emden = rhs("1/(x*y^2)");
        let mut s = Specializer::new(&emden).unwrap();
        let vals = ["I1", "I1_3", "I1_33"].map(|t| s.value(&tok(t)).unwrap());
        assert!(functionally_independent(&vals).unwrap());
        let i1 = s.value(&tok("I1")).unwrap();
        let i2 = s.value(&tok("I1_3")).unwrap();
        assert!(!functionally_independent(&[i1.clone(), i1, i2]).unwrap());
        assert!(functionally_independent(&[Expr::x(), Expr::y(), Expr::p()]).unwrap());
    }

    #[test]
    fn token_derivation_extends_words() {
        let x3 = TokenDerivation(3);
        assert_eq!(tok("I1_2").expr().derive(&x3).unwrap(), tok("I1_23").expr());
        assert_eq!(
            InvariantToken::Essential.expr().derive(&x3).unwrap(),
            Expr::one()
        );
        assert!(InvariantToken::Essential
            .expr()
            .derive(&TokenDerivation(1))
            .unwrap()
            .is_zero());
    }
}
