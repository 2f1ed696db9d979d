//! Command-line front end: generate bracket series, multiply words, apply
//! the partition involution, compute coproducts and Eisenstein expansions,
//! discover relations and run the verification suites.
//!
//! Exit codes: 0 on success and verified checks, 1 on failed verification,
//! 2 on usage errors.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use rug::{Complex, Float};

use qmzv::brackets::{bibracket_series, bracket_series, BiIndex, Index};
use qmzv::checks::{self, Check};
use qmzv::iterint::{deconcat_coproduct, goncharov_coproduct, regularize, Product};
use qmzv::mes::{g_shuffle, g_star_m, mes_fourier, mes_lattice, zk_limit, Precision};
use qmzv::relations::{find_relations, SeriesFamily};
use qmzv::words::{
    boxast, partition_involution, second_product, shuffle, shuffle_bracket, stuffle, LinComb,
};
use qmzv::Error;

#[derive(Parser)]
#[command(name = "qmzv", version, about = "Exact brackets, bi-brackets and multiple Eisenstein series")]
struct Cli {
    /// Truncation order for q-series output (default: QMZV_DEFAULT_ORDER or 50)
    #[arg(long, global = true)]
    order: Option<usize>,
    /// Absolute tolerance for numeric checks
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol: f64,
    /// Working precision in decimal digits
    #[arg(long, global = true, default_value_t = 64)]
    precision: u32,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the output to a file instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProductKind {
    /// The bracket quasi-shuffle on bi-index words
    Boxast,
    /// The harmonic product on plain index words
    Stuffle,
    /// The interleaving product on plain index words
    Shuffle,
    /// The partition-conjugated product P(P(u) ⊠∗ P(v))
    Second,
}

#[derive(Clone, Copy, ValueEnum)]
enum RegKind {
    Shuffle,
    Stuffle,
}

#[derive(Clone, Copy, ValueEnum)]
enum MesMethod {
    Lattice,
    Fourier,
    Shuffle,
    Star,
}

#[derive(Clone, Copy, ValueEnum)]
enum CoproductKind {
    Goncharov,
    Deconcat,
}

#[derive(Subcommand)]
enum Cmd {
    /// q-expansion of a bracket [s1,...,sl]
    Bracket {
        #[arg(long)]
        index: String,
    },
    /// q-expansion of a bi-bracket, index syntax "s1,..|r1,.."
    Bibracket {
        #[arg(long)]
        index: String,
    },
    /// Word-level product of two (bi-)index words
    Multiply {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[arg(long, value_enum, default_value_t = ProductKind::Boxast)]
        product: ProductKind,
    },
    /// d = q d/dq of a bi-bracket, as the exact bi-bracket combination
    Derive {
        #[arg(long)]
        index: String,
    },
    /// Partition involution of a bi-index word
    Partition {
        #[arg(long)]
        index: String,
    },
    /// Shuffle bracket [s1,...,sl]^⧢ as a bi-index combination (length <= 4)
    ShuffleBracket {
        #[arg(long)]
        index: String,
    },
    /// Coproduct of the basis iterated integral of an index
    Coproduct {
        #[arg(long)]
        index: String,
        #[arg(long, value_enum, default_value_t = CoproductKind::Goncharov)]
        kind: CoproductKind,
    },
    /// Regularize a word as a polynomial in T over admissible words
    Regularize {
        #[arg(long)]
        index: String,
        #[arg(long, value_enum, default_value_t = RegKind::Shuffle)]
        product: RegKind,
    },
    /// Multiple Eisenstein series: symbolic expansion and numeric value
    Mes {
        #[arg(long)]
        index: String,
        #[arg(long, value_enum, default_value_t = MesMethod::Fourier)]
        method: MesMethod,
        /// Evaluation point in the upper half-plane, e.g. "i", "1+2i", "0.5+1.5i"
        #[arg(long)]
        tau: Option<String>,
        /// Level bound for --method star, row cutoff for --method lattice
        #[arg(long, default_value_t = 80)]
        level: i64,
    },
    /// Extrapolate lim_{q→1} (1-q)^k times a (bi-)bracket series
    Zk {
        #[arg(long)]
        index: String,
        #[arg(long)]
        k: u32,
        /// Series order for the extrapolation grid (default grows with k)
        #[arg(long)]
        zk_order: Option<usize>,
    },
    /// Kernel of the coefficient matrix of a series family. Entries are
    /// bi-index strings, "d(INDEX)" for derivatives, or "delta" for the
    /// normalized discriminant.
    FindRelations {
        #[arg(long = "series", required = true)]
        series: Vec<String>,
    },
    /// Run a single named verification (delta12, relwt8, sh23, golden)
    Check {
        #[arg(long)]
        suite: String,
    },
    /// Run a verification suite: identities, homomorphism, partition,
    /// coproduct, mes-numeric, zk, relations
    Suite { name: String },
}

fn parse_tau(s: &str, bits: u32) -> Result<Complex, Error> {
    let s = s.trim().replace(' ', "");
    let parse_re = |t: &str| -> Result<Float, Error> {
        let t = if t.is_empty() || t == "+" {
            "1"
        } else if t == "-" {
            "-1"
        } else {
            t
        };
        Float::parse(t)
            .map(|v| Float::with_val(bits, v))
            .map_err(|e| Error::Parse(format!("bad number {t:?}: {e}")))
    };
    if let Some(im_part) = s.strip_suffix('i') {
        // split into real and imaginary pieces at the last +/- that is not
        // a leading sign or exponent marker
        let chars: Vec<char> = im_part.chars().collect();
        let mut split = None;
        for p in (1..chars.len()).rev() {
            if (chars[p] == '+' || chars[p] == '-') && chars[p - 1] != 'e' && chars[p - 1] != 'E' {
                split = Some(p);
                break;
            }
        }
        let (re, im) = match split {
            Some(p) => (&im_part[..p], &im_part[p..]),
            None => ("0", im_part),
        };
        Ok(Complex::with_val(bits, (parse_re(re)?, parse_re(im)?)))
    } else {
        Ok(Complex::with_val(bits, (parse_re(&s)?, Float::new(bits))))
    }
}

/// A family entry: a bi-index, "d(...)" or "delta".
fn parse_family_entry(raw: &str, order: usize) -> Result<(String, qmzv::qseries::QSeries), Error> {
    let raw = raw.trim();
    if raw == "delta" {
        return Ok(("delta".into(), qmzv::qseries::delta_series(order)));
    }
    if let Some(inner) = raw.strip_prefix("d(").and_then(|r| r.strip_suffix(')')) {
        let b: BiIndex = inner.parse()?;
        return Ok((format!("d({b})"), bibracket_series(&b, order).derive()));
    }
    let b: BiIndex = raw.parse()?;
    Ok((format!("[{b}]"), bibracket_series(&b, order)))
}

fn lincomb_text(lc: &LinComb<BiIndex>) -> String {
    if lc.is_zero() {
        return "0".into();
    }
    lc.iter()
        .map(|(w, c)| format!("{c} * [{w}]"))
        .collect::<Vec<_>>()
        .join("  +  ")
}

fn lincomb_index_text(lc: &LinComb<Index>) -> String {
    if lc.is_zero() {
        return "0".into();
    }
    lc.iter()
        .map(|(w, c)| format!("{c} * [{w}]"))
        .collect::<Vec<_>>()
        .join("  +  ")
}

struct Output {
    format: Format,
    out: Option<PathBuf>,
    config: serde_json::Value,
    lines: Vec<String>,
    json: serde_json::Value,
}

impl Output {
    fn emit(self) -> Result<(), Error> {
        let body = match self.format {
            Format::Text => {
                let mut s = String::new();
                if let Some(obj) = self.config.as_object() {
                    let kv: Vec<String> = obj.iter().map(|(k, v)| format!("{k}={v}")).collect();
                    s.push_str(&format!("# qmzv {}\n", kv.join(" ")));
                }
                for line in &self.lines {
                    s.push_str(line);
                    s.push('\n');
                }
                s
            }
            Format::Json => {
                let v = serde_json::json!({"config": self.config, "result": self.json});
                format!("{}\n", serde_json::to_string_pretty(&v).unwrap())
            }
        };
        match self.out {
            Some(path) => std::fs::File::create(&path)
                .and_then(|mut f| f.write_all(body.as_bytes()))
                .map_err(|e| Error::Parse(format!("cannot write {}: {e}", path.display()))),
            None => {
                print!("{body}");
                Ok(())
            }
        }
    }
}

fn suite_by_name(name: &str, prec: Precision) -> Result<Vec<Check>, Error> {
    Ok(match name {
        "identities" => {
            let mut v = checks::suite_golden_series();
            v.extend(checks::suite_identities());
            v
        }
        "homomorphism" => checks::suite_homomorphism(50, 7, 40, 20260809),
        "partition" => checks::suite_partition(6, 40),
        "coproduct" => {
            let mut v = checks::suite_coproduct();
            v.extend(checks::suite_regularization(40, 6, 20260809));
            v
        }
        "mes-numeric" => checks::suite_mes_numeric(prec),
        "zk" => checks::suite_zk(prec),
        "relations" => checks::suite_relations(),
        other => {
            return Err(Error::invalid(format!(
                "unknown suite {other:?}; expected identities, homomorphism, partition, coproduct, mes-numeric, zk or relations"
            )))
        }
    })
}

fn run(cli: Cli) -> Result<bool, Error> {
    let order = cli
        .order
        .or_else(|| {
            std::env::var("QMZV_DEFAULT_ORDER")
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or(50);
    let prec = Precision::digits(cli.precision);
    let bits = prec.bits();
    let mut config = serde_json::json!({
        "order": order,
        "tol": cli.tol,
        "precision": cli.precision,
    });
    let mut lines: Vec<String> = Vec::new();
    let mut json = serde_json::Value::Null;
    let mut verified = true;

    match &cli.cmd {
        Cmd::Bracket { index } => {
            config["verb"] = "bracket".into();
            config["index"] = index.clone().into();
            let s: Index = index.parse()?;
            let series = bracket_series(&s, order);
            lines.push(series.to_string());
            json = series.to_json();
        }
        Cmd::Bibracket { index } => {
            config["verb"] = "bibracket".into();
            config["index"] = index.clone().into();
            let b: BiIndex = index.parse()?;
            let series = bibracket_series(&b, order);
            lines.push(series.to_string());
            json = series.to_json();
        }
        Cmd::Multiply {
            left,
            right,
            product,
        } => {
            config["verb"] = "multiply".into();
            config["left"] = left.clone().into();
            config["right"] = right.clone().into();
            match product {
                ProductKind::Boxast => {
                    let u: BiIndex = left.parse()?;
                    let v: BiIndex = right.parse()?;
                    let p = boxast(&u, &v);
                    lines.push(lincomb_text(&p));
                    json = p.to_json();
                }
                ProductKind::Second => {
                    let u: BiIndex = left.parse()?;
                    let v: BiIndex = right.parse()?;
                    let p = second_product(&u, &v);
                    lines.push(lincomb_text(&p));
                    json = p.to_json();
                }
                ProductKind::Stuffle => {
                    let u: Index = left.parse()?;
                    let v: Index = right.parse()?;
                    let p = stuffle(&u, &v);
                    lines.push(lincomb_index_text(&p));
                    json = p.to_json();
                }
                ProductKind::Shuffle => {
                    let u: Index = left.parse()?;
                    let v: Index = right.parse()?;
                    let p = shuffle(&u, &v);
                    lines.push(lincomb_index_text(&p));
                    json = p.to_json();
                }
            }
        }
        Cmd::Derive { index } => {
            config["verb"] = "derive".into();
            config["index"] = index.clone().into();
            let b: BiIndex = index.parse()?;
            let mut lc = LinComb::zero();
            for j in 0..b.len() {
                let mut parts = b.parts().to_vec();
                let (s, r) = parts[j];
                parts[j] = (s + 1, r + 1);
                lc.add_term(
                    BiIndex::new(parts)?,
                    rug::Rational::from(s as u64 * (r as u64 + 1)),
                );
            }
            lines.push(lincomb_text(&lc));
            json = lc.to_json();
        }
        Cmd::Partition { index } => {
            config["verb"] = "partition".into();
            config["index"] = index.clone().into();
            let b: BiIndex = index.parse()?;
            let p = partition_involution(&b);
            lines.push(lincomb_text(&p));
            json = p.to_json();
        }
        Cmd::ShuffleBracket { index } => {
            config["verb"] = "shuffle-bracket".into();
            config["index"] = index.clone().into();
            let s: Index = index.parse()?;
            let p = shuffle_bracket(&s)?;
            lines.push(lincomb_text(&p));
            json = p.to_json();
        }
        Cmd::Coproduct { index, kind } => {
            config["verb"] = "coproduct".into();
            config["index"] = index.clone().into();
            let s: Index = index.parse()?;
            let t = match kind {
                CoproductKind::Goncharov => goncharov_coproduct(&s),
                CoproductKind::Deconcat => deconcat_coproduct(&s),
            };
            for ((l, r), c) in t.iter() {
                lines.push(format!("{c} * I({l}) ⊗ I({r})"));
            }
            json = t.to_json();
        }
        Cmd::Regularize { index, product } => {
            config["verb"] = "regularize".into();
            config["index"] = index.clone().into();
            let s: Index = index.parse()?;
            let p = match product {
                RegKind::Shuffle => Product::Shuffle,
                RegKind::Stuffle => Product::Stuffle,
            };
            let reg = regularize(p, &LinComb::single(s));
            let mut arr = Vec::new();
            for i in 0..=reg.degree() {
                let c = reg.coeff(i);
                if !c.is_zero() {
                    lines.push(format!("T^{i}: {}", lincomb_index_text(&c)));
                }
                arr.push(serde_json::json!({"power": i, "terms": c.to_json()}));
            }
            json = serde_json::Value::Array(arr);
        }
        Cmd::Mes {
            index,
            method,
            tau,
            level,
        } => {
            config["verb"] = "mes".into();
            config["index"] = index.clone().into();
            config["level"] = (*level).into();
            let s: Index = index.parse()?;
            let tau_c = tau.as_deref().map(|t| parse_tau(t, bits)).transpose()?;
            match method {
                MesMethod::Fourier | MesMethod::Shuffle => {
                    let e = match method {
                        MesMethod::Fourier => mes_fourier(&s)?,
                        _ => g_shuffle(&s)?,
                    };
                    for t in e.terms() {
                        let zeta = if t.zeta.is_empty() {
                            String::new()
                        } else {
                            format!(" ζ({})", t.zeta)
                        };
                        let bracket = if t.bracket.is_empty() {
                            String::new()
                        } else {
                            format!(" [{}]", t.bracket)
                        };
                        lines.push(format!(
                            "{}{zeta} (-2πi)^{}{bracket}",
                            t.coeff, t.twopii_pow
                        ));
                    }
                    let mut j = serde_json::json!({"expansion": e.to_json()});
                    if let Some(tau_c) = &tau_c {
                        let v = e.realize(tau_c, order.max(60), prec)?;
                        lines.push(format!("value at tau: {v}"));
                        j["value"] = serde_json::json!({
                            "re": v.real().to_string(),
                            "im": v.imag().to_string(),
                        });
                    }
                    json = j;
                }
                MesMethod::Lattice => {
                    let tau_c = tau_c
                        .ok_or_else(|| Error::invalid("--method lattice needs --tau"))?;
                    let v = mes_lattice(&s, &tau_c, *level, cli.tol, prec)?;
                    lines.push(format!("value: {}", v.value));
                    lines.push(format!("tail estimate: {:.3e}", v.tail_estimate.to_f64()));
                    json = serde_json::json!({
                        "re": v.value.real().to_string(),
                        "im": v.value.imag().to_string(),
                        "tail_estimate": v.tail_estimate.to_f64(),
                    });
                }
                MesMethod::Star => {
                    let tau_c =
                        tau_c.ok_or_else(|| Error::invalid("--method star needs --tau"))?;
                    let v = g_star_m(&s, *level, &tau_c, cli.tol, prec)?;
                    lines.push(format!("value: {v}"));
                    json = serde_json::json!({
                        "re": v.real().to_string(),
                        "im": v.imag().to_string(),
                    });
                }
            }
        }
        Cmd::Zk { index, k, zk_order } => {
            config["verb"] = "zk".into();
            config["index"] = index.clone().into();
            config["k"] = (*k).into();
            let b: BiIndex = index.parse()?;
            let n = zk_order.unwrap_or(((*k as usize) + 32) * 128);
            config["zk_order"] = n.into();
            let f = bibracket_series(&b, n);
            let r = zk_limit(&f, *k, cli.tol, prec)?;
            if r.diverged {
                lines.push("diverges (limit grows without bound)".into());
            } else {
                lines.push(format!("limit: {}", r.value));
            }
            lines.push(format!("error estimate: {:.3e}", r.error_estimate.to_f64()));
            json = serde_json::json!({
                "value": r.value.to_f64(),
                "error_estimate": r.error_estimate.to_f64(),
                "diverged": r.diverged,
                "grid_points": r.points,
            });
        }
        Cmd::FindRelations { series } => {
            config["verb"] = "find-relations".into();
            let mut labels = Vec::new();
            let mut members = Vec::new();
            for raw in series {
                let (label, s) = parse_family_entry(raw, order)?;
                labels.push(label);
                members.push(s);
            }
            let fam = SeriesFamily::new(labels.clone(), members)?;
            let rels = find_relations(&fam);
            if let Some(false) = rels.margin_ok {
                lines.push("# warning: order below the 2·weight + 20 safety margin".into());
            }
            if rels.basis.is_empty() {
                lines.push("no relations".into());
            }
            for v in &rels.basis {
                let terms: Vec<String> = labels
                    .iter()
                    .zip(v)
                    .filter(|(_, c)| c.cmp0() != std::cmp::Ordering::Equal)
                    .map(|(l, c)| format!("{c} * {l}"))
                    .collect();
                lines.push(format!("0 = {}", terms.join("  +  ")));
            }
            json = rels.to_json(&labels);
        }
        Cmd::Check { suite } => {
            config["verb"] = "check".into();
            config["suite"] = suite.clone().into();
            let checks = match suite.as_str() {
                "delta12" => checks::suite_identities()
                    .into_iter()
                    .filter(|c| c.name.starts_with("discriminant"))
                    .collect::<Vec<_>>(),
                "relwt8" => checks::suite_identities()
                    .into_iter()
                    .filter(|c| c.name.starts_with("[8]"))
                    .collect(),
                "sh23" => checks::suite_identities()
                    .into_iter()
                    .filter(|c| c.name.starts_with("[2]·[3]"))
                    .collect(),
                "golden" => checks::suite_golden_series(),
                other => {
                    return Err(Error::invalid(format!(
                        "unknown check {other:?}; expected delta12, relwt8, sh23 or golden"
                    )))
                }
            };
            verified = report(&checks, &mut lines, &mut json);
        }
        Cmd::Suite { name } => {
            config["verb"] = "suite".into();
            config["suite"] = name.clone().into();
            let checks = suite_by_name(name, prec)?;
            verified = report(&checks, &mut lines, &mut json);
        }
    }
    Output {
        format: cli.format,
        out: cli.out,
        config,
        lines,
        json,
    }
    .emit()?;
    Ok(verified)
}

fn report(checks: &[Check], lines: &mut Vec<String>, json: &mut serde_json::Value) -> bool {
    let mut all = true;
    let mut arr = Vec::new();
    for c in checks {
        all &= c.passed;
        let status = if c.passed { "PASS" } else { "FAIL" };
        let detail = if c.detail.is_empty() {
            String::new()
        } else {
            format!(" ({})", c.detail)
        };
        lines.push(format!("{status} [{:>6} ms] {}{detail}", c.millis, c.name));
        arr.push(serde_json::json!({
            "name": c.name,
            "passed": c.passed,
            "detail": c.detail,
            "millis": c.millis,
        }));
    }
    lines.push(format!(
        "{} of {} checks passed",
        checks.iter().filter(|c| c.passed).count(),
        checks.len()
    ));
    *json = serde_json::Value::Array(arr);
    all
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
