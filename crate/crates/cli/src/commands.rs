use std::cell::RefCell;
use std::fmt::Write as _;

use serde::Serialize;

use quadext::bounds::{
    alpha, certified_integrate, classical_error_constant, estimated_integrate, ErrorCertificate,
};
use quadext::convexity::{
    integrate_polynomial, is_n_convex_on_grid, support_certificate, uniform_grid,
};
use quadext::expr::EvalError;
use quadext::extremality::{check_even_sandwich, check_odd_sandwich, hadamard_chain};
use quadext::{parse, Error, Expr, Family, Operator, Parity, Rule};

use crate::{Command, Format};

/// `Ok(true)` on success, `Ok(false)` when a check ran and failed.
pub type Outcome = Result<bool, Error>;

/// Wraps an expression as an infallible `f64 -> f64`, remembering the first
/// evaluation error so it can be reported after the computation.
struct Integrand {
    expr: Expr,
    failure: RefCell<Option<EvalError>>,
}

impl Integrand {
    fn parse(source: &str) -> Result<Self, Error> {
        Ok(Integrand {
            expr: parse(source)?,
            failure: RefCell::new(None),
        })
    }

    fn call(&self, x: f64) -> f64 {
        match self.expr.eval(x) {
            Ok(v) => v,
            Err(e) => {
                self.failure.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        }
    }

    fn check(&self) -> Result<(), Error> {
        match self.failure.borrow_mut().take() {
            None => Ok(()),
            Some(source) => Err(Error::Evaluation {
                location: "the integrand".into(),
                source,
            }),
        }
    }
}

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn emit<T: Serialize>(format: Format, value: &T, table: impl FnOnce() -> String) {
    match format {
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(value).expect("serializable output")
        ),
        Format::Table => print!("{}", table()),
    }
}

fn check_interval(a: f64, b: f64) -> Result<(), Error> {
    if a.is_finite() && b.is_finite() && a < b {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "need finite a < b, got a = {a}, b = {b}"
        )))
    }
}

fn check_tol(tol: f64) -> Result<(), Error> {
    if tol.is_finite() && tol >= 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "tolerance must be finite and nonnegative, got {tol}"
        )))
    }
}

pub fn run(command: &Command) -> Outcome {
    match command {
        Command::Nodes { family, n, output } => nodes(*family, *n, output.format),
        Command::Integrate {
            expr,
            family,
            n,
            a,
            b,
            output,
        } => integrate(expr, *family, *n, *a, *b, output.format),
        Command::CheckConvexity {
            expr,
            n,
            a,
            b,
            grid,
            tol,
            output,
        } => check_convexity(expr, *n, (*a, *b), *grid, *tol, output.format),
        Command::CheckExtremality {
            expr,
            parity,
            n,
            operator,
            tol,
            output,
        } => check_extremality(expr, *parity, *n, operator, *tol, output.format),
        Command::Support {
            expr,
            kind,
            n,
            samples,
            tol,
            output,
        } => support(expr, *kind, *n, *samples, *tol, output.format),
        Command::Certify {
            expr,
            k,
            family,
            deriv_bound,
            output,
        } => certify(expr, *k, *family, *deriv_bound, output.format),
        Command::Constants { k, output } => constants(*k, output.format),
    }
}

fn nodes(family: Family, n: usize, format: Format) -> Outcome {
    let rule = Rule::new(family, n)?;
    emit(format, &rule, || {
        let mut out = format!(
            "{} ({}), exact through degree {}\n",
            rule.id(),
            rule.symbol(),
            rule.exactness_degree
        );
        let _ = writeln!(out, "{:>3}  {:>24}  {:>24}", "i", "node", "weight");
        for (i, (x, w)) in rule.nodes.iter().zip(&rule.weights).enumerate() {
            let _ = writeln!(out, "{:>3}  {:>24}  {:>24}", i + 1, num(*x), num(*w));
        }
        out
    });
    Ok(true)
}

#[derive(Serialize)]
struct Integral {
    expr: String,
    rule: String,
    a: f64,
    b: f64,
    value: f64,
}

fn integrate(source: &str, family: Family, n: usize, a: f64, b: f64, format: Format) -> Outcome {
    check_interval(a, b)?;
    let f = Integrand::parse(source)?;
    let rule = Rule::new(family, n)?;
    let value = rule.apply_on_interval(|x| f.call(x), a, b)?;
    f.check()?;
    let record = Integral {
        expr: f.expr.to_string(),
        rule: rule.id(),
        a,
        b,
        value,
    };
    emit(format, &record, || {
        format!(
            "{} of {} on [{a}, {b}]\n{}\n",
            rule.symbol(),
            record.expr,
            num(value)
        )
    });
    Ok(true)
}

fn check_convexity(
    source: &str,
    n: usize,
    (a, b): (f64, f64),
    grid: usize,
    tol: f64,
    format: Format,
) -> Outcome {
    check_interval(a, b)?;
    check_tol(tol)?;
    let f = Integrand::parse(source)?;
    let points = uniform_grid(a, b, grid);
    let report = is_n_convex_on_grid(|x| f.call(x), n, &points, tol)?;
    f.check()?;
    emit(format, &report, || {
        let mut out = format!(
            "{n}-convexity of {} on {grid} points over [{a}, {b}]\n",
            f.expr
        );
        let _ = writeln!(out, "windows          {}", report.windows);
        let _ = writeln!(
            out,
            "min difference   {} (window starting at x = {})",
            num(report.min_value),
            num(points[report.min_window])
        );
        let _ = writeln!(out, "noise floor      {}", num(report.noise_floor));
        let _ = writeln!(
            out,
            "{} (tol {:e})",
            if report.passed { "pass" } else { "FAIL" },
            report.tol
        );
        out
    });
    Ok(report.passed)
}

fn operator_from_spec(spec: &str) -> Result<Option<Operator>, Error> {
    match spec {
        "reference" => Ok(None),
        "hybrid" => Ok(Some(Operator::hybrid_example())),
        other => {
            let (family, n) = other.split_once(':').ok_or_else(|| {
                Error::domain(format!(
                    "unknown operator '{other}'; use reference, hybrid or FAMILY:N"
                ))
            })?;
            let n: usize = n
                .trim()
                .parse()
                .map_err(|_| Error::domain(format!("bad rule order in '{other}'")))?;
            Ok(Some(Operator::from_rule(&Rule::new(family.parse()?, n)?)))
        }
    }
}

fn check_extremality(
    source: &str,
    parity: Parity,
    n: usize,
    operator: &str,
    tol: f64,
    format: Format,
) -> Outcome {
    check_tol(tol)?;
    let f = Integrand::parse(source)?;
    let g = |x| f.call(x);
    let report = match (operator_from_spec(operator)?, parity) {
        (None, _) => hadamard_chain(g, n, parity, tol)?,
        (Some(op), Parity::Odd) => check_odd_sandwich(&op, g, n, tol)?,
        (Some(op), Parity::Even) => check_even_sandwich(&op, g, n, tol)?,
    };
    f.check()?;
    emit(format, &report, || {
        let order = match parity {
            Parity::Odd => 2 * n - 1,
            Parity::Even => 2 * n,
        };
        format!(
            "f = {}, {order}-convex sandwich, n = {n}\n{}",
            f.expr,
            report.to_table()
        )
    });
    Ok(report.pass)
}

#[derive(Serialize)]
struct SupportOutput<'a> {
    #[serde(flatten)]
    certificate: &'a quadext::convexity::SupportCertificate<f64>,
    monomial_coefficients: Vec<f64>,
    integral: f64,
    derivative_kink: bool,
}

fn support(
    source: &str,
    kind: quadext::SupportKind,
    n: usize,
    samples: usize,
    tol: f64,
    format: Format,
) -> Outcome {
    check_tol(tol)?;
    let f = Integrand::parse(source)?;
    let derivative = f.expr.differentiate(1);
    let df = Integrand {
        expr: derivative.expr,
        failure: RefCell::new(None),
    };
    let fprime = |x: f64| df.call(x);
    let cert = support_certificate(|x| f.call(x), Some(&fprime), kind, n, samples, tol)?;
    f.check()?;
    df.check()?;
    let out = SupportOutput {
        certificate: &cert,
        monomial_coefficients: cert.polynomial.to_monomial(),
        integral: integrate_polynomial(&cert.polynomial),
        derivative_kink: derivative.kink,
    };
    emit(format, &out, || {
        let mut s = format!(
            "{kind:?} support of {} for n = {n}, degree {}, {:?} f\n",
            f.expr,
            cert.polynomial.degree(),
            kind.side()
        );
        let _ = writeln!(s, "node residual    {}", num(cert.node_residual));
        let _ = writeln!(
            s,
            "worst violation  {} over {} samples",
            num(cert.worst_violation),
            cert.sample_count
        );
        let _ = writeln!(s, "integral of p    {}", num(out.integral));
        if derivative.kink {
            let _ = writeln!(s, "note: f' uses the right derivative at a kink");
        }
        let _ = writeln!(s, "coefficients (constant term first)");
        for (j, c) in out.monomial_coefficients.iter().enumerate() {
            let _ = writeln!(s, "  x^{j:<3} {}", num(*c));
        }
        let _ = writeln!(
            s,
            "{} (tol {:e})",
            if cert.passed { "pass" } else { "FAIL" },
            cert.tol
        );
        s
    });
    Ok(cert.passed)
}

fn certificate_table(expr: &Expr, c: &ErrorCertificate) -> String {
    let mut s = format!("integral of {expr} with {}\n", c.operator_id);
    let _ = writeln!(s, "estimate          {}", num(c.estimate));
    let _ = writeln!(
        s,
        "{:<18}{} = {}",
        format!("alpha_{}", c.k),
        c.alpha,
        num(c.alpha.to_f64())
    );
    let _ = writeln!(
        s,
        "{:<18}{}{}",
        format!("|f^({})| bound", c.k),
        num(c.derivative_bound),
        if c.certified { "" } else { " (estimated)" }
    );
    let _ = writeln!(s, "error bound       {}", num(c.bound));
    let _ = writeln!(
        s,
        "enclosure         [{}, {}]",
        num(c.enclosure[0]),
        num(c.enclosure[1])
    );
    let _ = writeln!(
        s,
        "{}",
        if c.certified {
            "certified"
        } else {
            "NOT certified: derivative bound estimated by sampling"
        }
    );
    s
}

fn certify(
    source: &str,
    k: usize,
    family: Family,
    deriv_bound: Option<f64>,
    format: Format,
) -> Outcome {
    let f = Integrand::parse(source)?;
    let cert = match deriv_bound {
        Some(b) => {
            let c = certified_integrate(|x| f.call(x), k, b, family)?;
            f.check()?;
            c
        }
        None => estimated_integrate(&f.expr, k, family)?,
    };
    emit(format, &cert, || certificate_table(&f.expr, &cert));
    Ok(true)
}

#[derive(Serialize)]
struct Classical {
    family: Family,
    n: usize,
    constant: String,
    order: usize,
}

#[derive(Serialize)]
struct Constants {
    k: usize,
    alpha: String,
    alpha_f64: f64,
    classical: Vec<Classical>,
}

fn constants(k: usize, format: Format) -> Outcome {
    let a = alpha(k)?;
    let mut classical = Vec::new();
    for family in Family::ALL {
        // orders: Gauss 2n, Lobatto 2n - 2, Radau 2n - 1
        let n = match family {
            Family::GaussLegendre if k.is_multiple_of(2) => k / 2,
            Family::Lobatto if k.is_multiple_of(2) => k / 2 + 1,
            Family::RadauLeft | Family::RadauRight if k % 2 == 1 => k.div_ceil(2),
            _ => continue,
        };
        if n < family.min_order() {
            continue;
        }
        let (c, order) = classical_error_constant(family, n)?;
        classical.push(Classical {
            family,
            n,
            constant: c.to_string(),
            order,
        });
    }
    let out = Constants {
        k,
        alpha: a.to_string(),
        alpha_f64: a.to_f64(),
        classical,
    };
    emit(format, &out, || {
        let mut s = format!("alpha_{k} = {}\n", out.alpha);
        for c in &out.classical {
            let _ = writeln!(
                s,
                "{}: constant {} on f^({})",
                c.family.symbol(c.n),
                c.constant,
                c.order
            );
        }
        s
    });
    Ok(true)
}
