//! Command-line front end. JSON reports go to stdout; human-readable tables go to
//! stderr. Exit codes: 0 on success, 1 when a verification fails, 2 on bad arguments.

use crate::error::Error;
use crate::functor::{Ladder, LadderWindow};
use crate::grading::WeightSystem;
use crate::linalg::{Field, DEFAULT_PRIME};
use crate::mforacle::{self, AuditWindow};
use crate::qalg;
use crate::tilting::{self, FamilyKind};
use clap::{Parser, Subcommand};
use serde_json::json;
use std::io::Write;

/// Environment variable holding the prime used for rank computations.
pub const FIELD_ENV: &str = "BPW_FIELD_MODULUS";

/// Largest accepted family size `prod (p_i - 1)` without `--allow-large`.
pub const SIZE_CAP: i64 = 512;

#[derive(Parser, Debug)]
#[command(name = "bpw", version, about = "Stable categories of L-graded Brieskorn-Pham singularities")]
struct Cli {
    /// Accept weight systems with prod (p_i - 1) above the size cap.
    #[arg(long, global = true)]
    allow_large: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Special elements and a table of graded dimensions.
    Describe {
        #[arg(short, long)]
        p: String,
    },
    /// List the summands of a tilting family.
    Tilt {
        #[arg(short, long)]
        p: String,
        /// cuboid | koszul | extended:I | replicated:t (1-based indices).
        #[arg(long, default_value = "cuboid")]
        kind: String,
    },
    /// Hom matrix of a family against the predicted Cartan matrix.
    Endo {
        #[arg(short, long)]
        p: String,
        #[arg(long, default_value = "cuboid")]
        kind: String,
        /// Print the Hom matrix as CSV instead of JSON.
        #[arg(long)]
        csv: bool,
    },
    /// Rigidity and exceptional-order report for a family.
    Verify {
        #[arg(short, long)]
        p: String,
        #[arg(long, default_value = "cuboid")]
        kind: String,
        /// Shift window `lo:hi`; defaults to `[-2n-4, 2n+4]`.
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
    },
    /// Ladder checks for the split with `p_1n = q`.
    Ladder {
        #[arg(short, long)]
        p: String,
        #[arg(long)]
        split: i64,
    },
    /// Glue cuboid families of the two reduced weights through `psi_{1,k1}` and `psi_{2,k2}`.
    Glue {
        #[arg(short, long)]
        p: String,
        #[arg(long)]
        split: i64,
        /// `k1,k2`; defaults to `q-1,0`.
        #[arg(long, allow_hyphen_values = true)]
        ks: Option<String>,
        #[arg(long, default_value = "cuboid")]
        kind1: String,
        #[arg(long, default_value = "cuboid")]
        kind2: String,
    },
    /// Coxeter polynomial suites.
    Coxeter {
        /// happel-seidel | replicated | dynkin
        #[arg(long)]
        suite: String,
    },
    /// Compare the Hom calculus with the matrix-factorization oracle.
    OracleCheck {
        #[arg(short, long)]
        p: String,
        /// Levels of c added to twists, `lo:hi`.
        #[arg(long, default_value = "-2:2", allow_hyphen_values = true)]
        levels: String,
        /// Shifts, `lo:hi`.
        #[arg(long, default_value = "-4:4", allow_hyphen_values = true)]
        shifts: String,
    },
    /// Quiver of an algebra: `lambda:q1,q2,..`, `gamma:t`, `nakayama:n,m` or a family kind.
    Quiver {
        #[arg(short, long)]
        p: Option<String>,
        #[arg(long)]
        algebra: String,
        /// Emit Graphviz DOT instead of JSON.
        #[arg(long)]
        dot: bool,
    },
}

enum Failure {
    BadArgs(String),
    Failed(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_)
            | Error::InvalidWeights(_)
            | Error::InvalidSplit(_)
            | Error::OutOfRange(_)
            | Error::WeightMismatch(..) => Failure::BadArgs(e.to_string()),
            _ => Failure::Failed(e.to_string()),
        }
    }
}

type CliResult = std::result::Result<bool, Failure>;

/// Field from the environment, defaulting to `F_32003`.
pub fn field_from_env() -> std::result::Result<Field, Error> {
    match std::env::var(FIELD_ENV) {
        Ok(v) => {
            let q: u64 = v.trim().parse().map_err(|_| Error::Parse(format!("{FIELD_ENV}={v:?}")))?;
            Field::prime(q)
        }
        Err(_) => Ok(Field::Prime(DEFAULT_PRIME)),
    }
}

fn weights(text: &str, allow_large: bool) -> std::result::Result<WeightSystem, Failure> {
    let w = WeightSystem::parse(text)?;
    let size: i64 = w.p().iter().map(|p| p - 1).product();
    if size > SIZE_CAP && !allow_large {
        return Err(Failure::BadArgs(format!(
            "prod (p_i - 1) = {size} exceeds {SIZE_CAP}; pass --allow-large to override"
        )));
    }
    Ok(w)
}

fn pair(text: &str, sep: char) -> std::result::Result<(i64, i64), Failure> {
    let bad = || Failure::BadArgs(format!("expected two integers separated by {sep:?}, got {text:?}"));
    let (a, b) = text.split_once(sep).ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

fn emit(out: &mut dyn Write, v: &serde_json::Value) {
    let _ = writeln!(out, "{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn matrix_rows(m: &crate::linalg::IntMatrix) -> serde_json::Value {
    json!(m.to_rows())
}

/// Runs the CLI on `argv` (including the program name) and returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let field = match field_from_env() {
        Ok(f) => f,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 2;
        }
    };
    match dispatch(cli, field, out, err) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(Failure::BadArgs(m)) => {
            let _ = writeln!(err, "error: {m}");
            2
        }
        Err(Failure::Failed(m)) => {
            let _ = writeln!(err, "verification failed: {m}");
            1
        }
    }
}

fn dispatch(cli: Cli, field: Field, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    let large = cli.allow_large;
    match cli.command {
        Command::Describe { p } => {
            let w = weights(&p, large)?;
            let n = w.n();
            let hi: Vec<i64> = w.p().iter().map(|p| p - 1).collect();
            let mut table = Vec::new();
            let _ = writeln!(err, "{:>16} {:>6} {:>6}", "x", "dim R", "dim S");
            for x in w.box_elements(&vec![0; n], &hi) {
                let _ = writeln!(err, "{:>16} {:>6} {:>6}", x.to_string(), x.dim_r(), x.dim_s());
                table.push(json!({"x": x.to_string(), "dim_R": x.dim_r(), "dim_S": x.dim_s()}));
            }
            let size: i64 = hi.iter().product();
            emit(
                out,
                &json!({
                    "weights": w.p(),
                    "s": w.s().to_string(),
                    "c": w.c().to_string(),
                    "omega": w.omega().to_string(),
                    "delta": w.delta().to_string(),
                    "delta_is_zero": w.delta().is_zero(),
                    "cuboid_summands": size,
                    "dims": table,
                }),
            );
            Ok(true)
        }
        Command::Tilt { p, kind } => {
            let w = weights(&p, large)?;
            let fam = tilting::family(&w, &FamilyKind::parse(&kind, w.n())?)?;
            for (i, l) in fam.labels().iter().enumerate() {
                let _ = writeln!(err, "{:>4}  {l}", i + 1);
            }
            emit(out, &fam.to_json());
            Ok(true)
        }
        Command::Endo { p, kind, csv } => {
            let w = weights(&p, large)?;
            let k = FamilyKind::parse(&kind, w.n())?;
            let fam = tilting::family(&w, &k)?;
            let h = tilting::hom_matrix(&fam)?;
            let pred = tilting::predicted_algebra(&w, &k)?;
            let labels = fam.labels();
            let equal = h == pred.cartan;
            let diff = tilting::diff_table(&labels, &h, &pred.cartan);
            let _ = write!(err, "{}", qalg::matrix_csv(&labels, &h));
            let _ = writeln!(err, "predicted {}: {}", pred.name, if equal { "equal" } else { "DIFFERENT" });
            if csv {
                let _ = write!(out, "{}", qalg::matrix_csv(&labels, &h));
            } else {
                emit(
                    out,
                    &json!({
                        "family": fam.to_json(),
                        "hom_matrix": matrix_rows(&h),
                        "predicted": pred.name,
                        "predicted_cartan": matrix_rows(&pred.cartan),
                        "equal": equal,
                        "diff": diff,
                    }),
                );
            }
            Ok(equal)
        }
        Command::Verify { p, kind, window } => {
            let w = weights(&p, large)?;
            let fam = tilting::family(&w, &FamilyKind::parse(&kind, w.n())?)?;
            let win = window.map(|s| pair(&s, ':')).transpose()?;
            let rep = tilting::verify_tilting(&fam, win)?;
            let _ = writeln!(
                err,
                "{} summands, window {:?}: {} rigidity failures, {} unknown, {}",
                rep.summands,
                rep.window,
                rep.rigidity_failures.len(),
                rep.unknown.len(),
                if rep.passed { "PASS" } else { "FAIL" }
            );
            emit(out, &serde_json::to_value(&rep).expect("serializable"));
            Ok(rep.passed)
        }
        Command::Ladder { p, split } => {
            let w = weights(&p, large)?;
            let lad = Ladder::build(&w, split)?;
            let mut win = LadderWindow::standard(&w);
            win.field = field;
            let rep = lad.check_recollement(&win)?;
            let _ = writeln!(
                err,
                "composite zero {} ({}), periodicity {} ({}), fully faithful disagreements {}, adjunction pairs {}, partition {}",
                rep.composite_zero,
                rep.composite_checked,
                rep.periodicity,
                rep.periodicity_checked,
                rep.ff_disagreements(),
                rep.adjunction.len(),
                rep.partition
            );
            emit(
                out,
                &json!({
                    "weights": w.p(),
                    "split": [lad.split.0, lad.split.1],
                    "report": serde_json::to_value(&rep).expect("serializable"),
                    "passed": rep.passed(),
                }),
            );
            Ok(rep.passed())
        }
        Command::Glue { p, split, ks, kind1, kind2 } => {
            let w = weights(&p, large)?;
            let lad = Ladder::build(&w, split)?;
            let (k1, k2) = match ks {
                Some(s) => pair(&s, ',')?,
                None => (lad.q() - 1, 0),
            };
            let r1 = lad.reduced(1).clone();
            let r2 = lad.reduced(2).clone();
            let t1 = tilting::family(&r1, &FamilyKind::parse(&kind1, r1.n())?)?;
            let t2 = tilting::family(&r2, &FamilyKind::parse(&kind2, r2.n())?)?;
            let (fam, rep) = tilting::glue(&lad, &t1, &t2, k1, k2, None)?;
            let _ = writeln!(
                err,
                "glued {} summands; obstructions: {} left, {} right",
                fam.len(),
                rep.obstruction_left.len(),
                rep.obstruction_right.len()
            );
            emit(
                out,
                &json!({
                    "family": fam.to_json(),
                    "report": serde_json::to_value(&rep).expect("serializable"),
                }),
            );
            Ok(rep.vanishes)
        }
        Command::Coxeter { suite } => {
            let rows = qalg::suite(&suite)?;
            for r in &rows {
                let _ = writeln!(err, "{}: {}", r.case, if r.equal { "equal" } else { "DIFFERENT" });
                for (a, p) in r.algebras.iter().zip(&r.polynomials) {
                    let _ = writeln!(err, "    {a:<24} {p}");
                }
            }
            let ok = rows.iter().all(|r| r.equal);
            emit(out, &json!({"suite": suite, "rows": serde_json::to_value(&rows).expect("serializable"), "passed": ok}));
            Ok(ok)
        }
        Command::OracleCheck { p, levels, shifts } => {
            let w = weights(&p, large)?;
            let window = AuditWindow { levels: pair(&levels, ':')?, shifts: pair(&shifts, ':')? };
            let rep = mforacle::audit(&w, window, field)?;
            let _ = writeln!(
                err,
                "{}: {} pairs, {} agree, {} unknown ({:.1}%), {} disagree",
                rep.weights,
                rep.pairs,
                rep.agreements,
                rep.unknown,
                100.0 * rep.unknown_rate,
                rep.disagreements.len()
            );
            emit(out, &serde_json::to_value(&rep).expect("serializable"));
            Ok(rep.passed())
        }
        Command::Quiver { p, algebra, dot } => {
            let alg = build_algebra(p.as_deref(), &algebra, large)?;
            if dot {
                let _ = write!(out, "{}", alg.to_dot());
            } else {
                emit(out, &serde_json::to_value(&alg).expect("serializable"));
            }
            Ok(true)
        }
    }
}

fn build_algebra(
    p: Option<&str>,
    text: &str,
    large: bool,
) -> std::result::Result<qalg::AlgebraPresentation, Failure> {
    let need_w = || -> std::result::Result<WeightSystem, Failure> {
        weights(p.ok_or_else(|| Failure::BadArgs(format!("{text} needs -p")))?, large)
    };
    let ints = |s: &str| -> std::result::Result<Vec<i64>, Failure> {
        s.split(',')
            .map(|t| t.trim().parse::<i64>().map_err(|_| Failure::BadArgs(format!("bad integer list {s:?}"))))
            .collect()
    };
    let (head, rest) = text.split_once(':').unwrap_or((text, ""));
    Ok(match head {
        "lambda" => qalg::lambda_q(&need_w()?, &ints(rest)?)?,
        "gamma" => {
            let t = ints(rest)?;
            let w = need_w()?;
            if t.len() != 1 || t[0] < 1 {
                return Err(Failure::BadArgs(format!("gamma needs one index, got {rest:?}")));
            }
            qalg::gamma_quiver(&w, (t[0] - 1) as usize)?
        }
        "nakayama" => match ints(rest)?.as_slice() {
            [n, m] if *n >= 1 && *m >= 1 => qalg::nakayama(*n as usize, *m as usize)?,
            _ => return Err(Failure::BadArgs(format!("nakayama needs n,m >= 1, got {rest:?}"))),
        },
        _ => {
            let w = need_w()?;
            tilting::predicted_algebra(&w, &FamilyKind::parse(text, w.n())?)?
        }
    })
}
