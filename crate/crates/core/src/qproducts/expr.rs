//! Expression trees over product atoms, with a canonical printer.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum QExpr {
    Const(BigRational),
    Q,
    /// `J(a) = (q^a;q^a)_∞`
    Euler(u64),
    /// `J(a,b)`
    Jab(u64, u64),
    /// `eta(δ,g)`
    Eta(u64, u64),
    /// `X(j,K) = X(q^j; q^K)`
    X(u64, u64),
    /// `H(j,K) = H(q^j; q^K)`
    H(u64, u64),
    /// `sigma(k) = Σ_{n≥1} q^(kn) / (1 - q^(kn))^2`
    Sigma(u64),
    BigT,
    SmallT,
    V(u32),
    Y(u32),
    /// Named pipeline resolved at evaluation time, e.g. `F(1)`.
    Call(String, Vec<QExpr>),
    Neg(Box<QExpr>),
    Add(Box<QExpr>, Box<QExpr>),
    Sub(Box<QExpr>, Box<QExpr>),
    Mul(Box<QExpr>, Box<QExpr>),
    Div(Box<QExpr>, Box<QExpr>),
    Pow(Box<QExpr>, i64),
    Scale(Box<QExpr>, u64),
}

impl QExpr {
    pub fn int(n: i64) -> Self {
        QExpr::Const(BigRational::from_integer(n.into()))
    }

    pub fn rational(n: i64, d: i64) -> Self {
        QExpr::Const(BigRational::new(n.into(), d.into()))
    }

    pub fn add(self, o: QExpr) -> Self {
        QExpr::Add(Box::new(self), Box::new(o))
    }

    pub fn sub(self, o: QExpr) -> Self {
        QExpr::Sub(Box::new(self), Box::new(o))
    }

    pub fn mul(self, o: QExpr) -> Self {
        QExpr::Mul(Box::new(self), Box::new(o))
    }

    pub fn div(self, o: QExpr) -> Self {
        QExpr::Div(Box::new(self), Box::new(o))
    }

    pub fn pow(self, n: i64) -> Self {
        QExpr::Pow(Box::new(self), n)
    }

    pub fn scale(self, k: u64) -> Self {
        QExpr::Scale(Box::new(self), k)
    }

    pub fn neg(self) -> Self {
        QExpr::Neg(Box::new(self))
    }

    /// Applies `f` to every node bottom-up.
    pub fn map(&self, f: &mut dyn FnMut(QExpr) -> QExpr) -> QExpr {
        use QExpr::*;
        let out = match self {
            Neg(a) => Neg(Box::new(a.map(f))),
            Add(a, b) => Add(Box::new(a.map(f)), Box::new(b.map(f))),
            Sub(a, b) => Sub(Box::new(a.map(f)), Box::new(b.map(f))),
            Mul(a, b) => Mul(Box::new(a.map(f)), Box::new(b.map(f))),
            Div(a, b) => Div(Box::new(a.map(f)), Box::new(b.map(f))),
            Pow(a, n) => Pow(Box::new(a.map(f)), *n),
            Scale(a, k) => Scale(Box::new(a.map(f)), *k),
            Call(n, args) => Call(n.clone(), args.iter().map(|a| a.map(f)).collect()),
            leaf => leaf.clone(),
        };
        f(out)
    }

    fn precedence(&self) -> u8 {
        match self {
            QExpr::Add(..) | QExpr::Sub(..) => 1,
            QExpr::Mul(..) | QExpr::Div(..) => 2,
            QExpr::Neg(..) => 3,
            QExpr::Const(c) if c.is_negative() || !c.denom().is_one() => 3,
            QExpr::Pow(..) | QExpr::Scale(..) => 4,
            _ => 5,
        }
    }
}

fn wrap(e: &QExpr, min_prec: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if e.precedence() < min_prec {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for QExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use QExpr::*;
        match self {
            Const(c) => {
                if c.denom().is_one() {
                    write!(f, "{}", c.numer())
                } else {
                    write!(f, "{}/{}", c.numer(), c.denom())
                }
            }
            Q => write!(f, "q"),
            Euler(a) => write!(f, "J({a})"),
            Jab(a, b) => write!(f, "J({a},{b})"),
            Eta(d, g) => write!(f, "eta({d},{g})"),
            X(j, k) => write!(f, "X({j},{k})"),
            H(j, k) => write!(f, "H({j},{k})"),
            Sigma(k) => write!(f, "sigma({k})"),
            BigT => write!(f, "T"),
            SmallT => write!(f, "t"),
            V(m) => write!(f, "V{m}"),
            Y(m) => write!(f, "Y{m}"),
            Call(name, args) => {
                write!(f, "{name}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
            Neg(a) => {
                write!(f, "-")?;
                // a bare literal after '-' would lex as a signed constant
                if matches!(**a, Const(_)) {
                    write!(f, "({a})")
                } else {
                    wrap(a, 4, f)
                }
            }
            Add(a, b) => {
                wrap(a, 1, f)?;
                write!(f, " + ")?;
                wrap(b, 2, f)
            }
            Sub(a, b) => {
                wrap(a, 1, f)?;
                write!(f, " - ")?;
                wrap(b, 2, f)
            }
            Mul(a, b) => {
                wrap(a, 2, f)?;
                write!(f, "*")?;
                wrap(b, 3, f)
            }
            Div(a, b) => {
                wrap(a, 2, f)?;
                write!(f, "/")?;
                if matches!(**b, Const(_)) {
                    write!(f, "({b})")
                } else {
                    wrap(b, 4, f)
                }
            }
            Pow(a, n) => {
                wrap(a, 5, f)?;
                write!(f, "^{n}")
            }
            Scale(a, k) => {
                match **a {
                    Pow(..) => write!(f, "{a}")?,
                    _ => wrap(a, 5, f)?,
                }
                write!(f, "@{k}")
            }
        }
    }
}
