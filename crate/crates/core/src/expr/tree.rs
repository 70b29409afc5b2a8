use super::poly::Q;
use super::rat::Expr;
use super::var::VarId;
use crate::error::{Error, Result};

/// An unsimplified expression as produced by the parser.
#[derive(Clone, Debug, PartialEq)]
pub enum Tree {
    Num(Q),
    Var(VarId),
    Add(Box<Tree>, Box<Tree>),
    Sub(Box<Tree>, Box<Tree>),
    Mul(Box<Tree>, Box<Tree>),
    Div(Box<Tree>, Box<Tree>),
    Neg(Box<Tree>),
    Pow(Box<Tree>, u32),
}

#[allow(clippy::should_implement_trait)]
impl Tree {
    pub fn add(a: Tree, b: Tree) -> Tree {
        Tree::Add(Box::new(a), Box::new(b))
    }
    pub fn sub(a: Tree, b: Tree) -> Tree {
        Tree::Sub(Box::new(a), Box::new(b))
    }
    pub fn mul(a: Tree, b: Tree) -> Tree {
        Tree::Mul(Box::new(a), Box::new(b))
    }
    pub fn div(a: Tree, b: Tree) -> Tree {
        Tree::Div(Box::new(a), Box::new(b))
    }
    pub fn neg(a: Tree) -> Tree {
        Tree::Neg(Box::new(a))
    }
    pub fn pow(a: Tree, e: u32) -> Tree {
        Tree::Pow(Box::new(a), e)
    }
}

/// Evaluates a tree to its canonical form.
pub fn normalize(t: &Tree) -> Result<Expr> {
    Ok(match t {
        Tree::Num(c) => Expr::constant(c.clone()),
        Tree::Var(v) => Expr::var(v.clone()),
        Tree::Add(a, b) => normalize(a)? + normalize(b)?,
        Tree::Sub(a, b) => normalize(a)? - normalize(b)?,
        Tree::Mul(a, b) => normalize(a)? * normalize(b)?,
        Tree::Div(a, b) => {
            let d = normalize(b)?;
            if d.is_zero() {
                return Err(Error::DivisionByZero);
            }
            normalize(a)?.checked_div(&d)?
        }
        Tree::Neg(a) => -normalize(a)?,
        Tree::Pow(a, e) => normalize(a)?.pow(*e),
    })
}

#[cfg(test)]
mod tests {
    use super::super::poly::q;
    use super::*;

    #[test]
    fn normalize_cancels() {
        let x = Tree::Var(VarId::X);
        let one = Tree::Num(q(1));
        let t = Tree::div(
            Tree::sub(Tree::pow(x.clone(), 2), one.clone()),
            Tree::sub(x.clone(), one.clone()),
        );
        assert_eq!(normalize(&t).unwrap(), Expr::x() + Expr::one());
    }

    #[test]
    fn zero_denominator() {
        let x = Tree::Var(VarId::X);
        let t = Tree::div(Tree::Num(q(1)), Tree::sub(x.clone(), x));
        assert_eq!(normalize(&t), Err(Error::DivisionByZero));
    }
}
