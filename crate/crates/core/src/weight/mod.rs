//! The biasing function `w`.

mod expr;

use std::fmt;
use std::sync::Arc;

pub use expr::{parse_weight, BinOp, Expr, Family, WeightSpec};

use crate::error::{Error, Result};

/// A positive biasing function, from a parsed expression or a closure.
#[derive(Clone)]
pub enum WeightFunction {
    Expr(WeightSpec),
    Custom { description: String, f: Arc<dyn Fn(f64) -> f64 + Send + Sync> },
}

impl WeightFunction {
    pub fn parse(spec: &str) -> Result<Self> {
        parse_weight(spec).map(WeightFunction::Expr)
    }

    /// `w = 1`: an unbiased sample.
    pub fn unit() -> Self {
        WeightFunction::Expr(parse_weight("1").expect("constant parses"))
    }

    pub fn custom(description: impl Into<String>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        WeightFunction::Custom { description: description.into(), f: Arc::new(f) }
    }

    pub fn description(&self) -> String {
        match self {
            WeightFunction::Expr(spec) => spec.to_string(),
            WeightFunction::Custom { description, .. } => description.clone(),
        }
    }

    /// Raw evaluation; may be zero or negative.
    pub fn raw(&self, x: f64) -> Result<f64> {
        match self {
            WeightFunction::Expr(spec) => spec.eval(x),
            WeightFunction::Custom { f, .. } => Ok(f(x)),
        }
    }

    /// `w(x)`, rejecting nonpositive or non-finite values.
    pub fn eval(&self, x: f64) -> Result<f64> {
        let v = self.raw(x)?;
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::NonPositiveWeight { x, value: v });
        }
        Ok(v)
    }

    /// Weights at every sample point.
    pub fn eval_all(&self, sample: &[f64]) -> Result<Vec<f64>> {
        sample.iter().map(|&x| self.eval(x)).collect()
    }
}

impl fmt::Debug for WeightFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WeightFunction({})", self.description())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn application_weight() {
        let w = parse_weight("0.1 + 0.9*x").unwrap();
        assert!((w.eval(0.5).unwrap() - 0.55).abs() < 1e-15);
    }

    #[test]
    fn inverse_beta_weight() {
        let w = parse_weight("x^-2 * (1-x)^-2").unwrap();
        assert_eq!(w.eval(0.5).unwrap(), 16.0);
        let fam = parse_weight("betainv(2, 2)").unwrap();
        assert_eq!(fam.eval(0.5).unwrap(), 16.0);
        assert!((fam.eval(0.2).unwrap() - w.eval(0.2).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn syntax_error_offset() {
        match parse_weight("1 +") {
            Err(Error::Syntax { offset, .. }) => assert_eq!(offset, 3),
            other => panic!("{other:?}"),
        }
        match parse_weight("2 * y") {
            Err(Error::Syntax { offset, .. }) => assert_eq!(offset, 4),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_weight("(x + 1"), Err(Error::Syntax { offset: 6, .. })));
        assert!(matches!(parse_weight(""), Err(Error::Syntax { offset: 0, .. })));
        assert!(matches!(parse_weight("x 2"), Err(Error::Syntax { offset: 2, .. })));
    }

    #[test]
    fn evaluation_errors_report_x() {
        let w = parse_weight("1 / (x - 0.5)").unwrap();
        assert!(matches!(w.eval(0.5), Err(Error::Evaluation { x, .. }) if x == 0.5));
        let w = parse_weight("x^-1").unwrap();
        assert!(matches!(w.eval(0.0), Err(Error::Evaluation { x, .. }) if x == 0.0));
    }

    #[test]
    fn families() {
        assert_eq!(parse_weight("linear(0.1, 0.9)").unwrap().eval(0.5).unwrap(), 0.1 + 0.9 * 0.5);
        assert_eq!(parse_weight("quad(0.1, 2)").unwrap().eval(0.5).unwrap(), 0.6);
        assert_eq!(parse_weight("identity").unwrap().eval(0.25).unwrap(), 0.25);
        assert_eq!(parse_weight("identity()").unwrap().eval(0.25).unwrap(), 0.25);
        assert_eq!(parse_weight("2 * identity").unwrap().eval(0.25).unwrap(), 0.5);
    }

    #[test]
    fn precedence_and_associativity() {
        let w = parse_weight("1 - x - x * 2 / 4 + 3^2").unwrap();
        let x = 0.3f64;
        assert!((w.eval(x).unwrap() - (1.0 - x - x * 2.0 / 4.0 + 9.0)).abs() < 1e-15);
        assert_eq!(parse_weight("1.5e1").unwrap().eval(0.0).unwrap(), 15.0);
    }

    #[test]
    fn weight_function_positivity() {
        let w = WeightFunction::parse("x - 0.5").unwrap();
        assert!(matches!(w.eval(0.2), Err(Error::NonPositiveWeight { .. })));
        assert_eq!(w.eval(0.75).unwrap(), 0.25);
        assert_eq!(WeightFunction::unit().eval(123.0).unwrap(), 1.0);
        let c = WeightFunction::custom("twice", |x| 2.0 * x);
        assert_eq!(c.eval(2.0).unwrap(), 4.0);
        assert_eq!(c.description(), "twice");
    }

    const CORPUS: [&str; 50] = [
        "1", "2", "x", "0.1 + 0.9*x", "x^-2 * (1-x)^-2", "0.1 + 2*x^2", "identity", "linear(0.1, 0.9)",
        "quad(0.1, 2)", "betainv(2, 2)", "betainv(0.5, 1.5)", "(x)", "((x))", "x^2", "x^-0.5", "x^+3",
        "1/x", "1/(1+x)", "x*x*x", "x/2/3", "1-x-x", "(1-x)^2", "(x^2)^3", "(2^2)^1", "3 * (x + 1)",
        "0.5 * linear(1, 2)", "identity() + 1", "1e-3 + x", "2.5E2 * x", ".5 + x", "5. * x", "x - 0.25",
        "(0.1 + 0.9 * x) / (1 + x)", "x^0.5 * (1 - x)^0.5", "1 + x + x^2 + x^3", "quad(1, -0.5)",
        "linear(-1, 3)", "betainv(-1, -1)", "x * (1 - x)", "(((1)))", "1 / (2 * x + 1)", "7",
        "x ^ 2", " x + 1 ", "0.000001 + x", "1000000 * x", "x*(x*(x*(x+1)+1)+1)", "2 - (3 - x)",
        "x / (x + 1)^2", "(x + 1)^-1 * 4",
    ];

    #[test]
    fn print_parse_round_trip_corpus() {
        for src in CORPUS {
            let first = parse_weight(src).unwrap_or_else(|e| panic!("{src}: {e}"));
            let printed = first.to_string();
            let second = parse_weight(&printed).unwrap_or_else(|e| panic!("{printed}: {e}"));
            assert_eq!(first.expr(), second.expr(), "{src} -> {printed}");
        }
    }

    fn direct_eval(e: &Expr, x: f64) -> f64 {
        match e {
            Expr::Const(c) => *c,
            Expr::Var => x,
            Expr::Binary(op, l, r) => {
                let (a, b) = (direct_eval(l, x), direct_eval(r, x));
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => a / b,
                }
            }
            Expr::Pow(b, p) => direct_eval(b, x).powf(*p),
            Expr::Family(Family::Identity) => x,
            Expr::Family(Family::Linear { c0, c1 }) => c0 + c1 * x,
            Expr::Family(Family::Quad { c0, c2 }) => c0 + c2 * x * x,
            Expr::Family(Family::BetaInv { b1, b2 }) => x.powf(-b1) * (1.0 - x).powf(-b2),
        }
    }

    fn arb_expr() -> impl Strategy<Value = Expr> {
        let leaf = prop_oneof![
            (0.0f64..100.0).prop_map(Expr::Const),
            Just(Expr::Var),
            (0.0f64..2.0, 0.0f64..2.0).prop_map(|(c0, c1)| Expr::Family(Family::Linear { c0, c1 })),
        ];
        leaf.prop_recursive(4, 24, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone(), prop_oneof![Just(BinOp::Add), Just(BinOp::Sub), Just(BinOp::Mul), Just(BinOp::Div)])
                    .prop_map(|(l, r, op)| Expr::Binary(op, Box::new(l), Box::new(r))),
                (inner, -3.0f64..3.0).prop_map(|(b, p)| Expr::Pow(Box::new(b), p)),
            ]
        })
    }

    proptest! {
        #[test]
        fn printed_trees_reparse_identically(e in arb_expr()) {
            let printed = e.to_string();
            let reparsed = parse_weight(&printed).unwrap();
            prop_assert_eq!(reparsed.expr(), &e);
        }

        #[test]
        fn eval_matches_direct_recursion(e in arb_expr(), x in 0.01f64..0.99) {
            let direct = direct_eval(&e, x);
            if let Ok(v) = e.eval(x) {
                if direct.is_finite() {
                    prop_assert!((v - direct).abs() <= 1e-15 * direct.abs().max(1.0));
                }
            }
        }
    }
}
