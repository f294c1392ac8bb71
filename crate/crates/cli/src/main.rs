//! Command-line front end: twist-word evaluation, spin membership and
//! extendability, generation certificates, group orders, Torelli
//! factorization, and the genus-2 coset table.
//!
//! Exit codes: 0 on success or a true verdict, 1 on a false verdict or a
//! verification mismatch, 2 on input errors.

use std::io::Read;
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use mcg_core::certify::{certify_o_q1_generation, twist_images, verify_square_transvections};
use mcg_core::closure::{form_orbit, group_order_bfs};
use mcg_core::factorize::{factorize_tacks, verify_certificate, FactorizationCertificate};
use mcg_core::genus::Genus;
use mcg_core::membership::{is_extendable_k3_sum, is_spin_member, non_preserving_witness};
use mcg_core::quadform::{enumerate_lambda, QuadraticForm};
use mcg_core::rokhlin::{arf_from_signature, surface_catalog};
use mcg_core::schreier::{schreier_table, table_to_json, CosetGraph};
use mcg_core::tacks::TackSequence;
use mcg_core::words::{gg_generators, parse_word, print_word};

#[derive(Parser)]
#[command(
    name = "mcg",
    about = "Exact homology actions of surface mapping classes",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GenusArg {
    /// Surface genus.
    #[arg(short = 'g', long = "genus")]
    genus: usize,
}

#[derive(Args)]
struct FormArg {
    /// Quadratic form: q0, q1, or basis values like `[1,1,0,0]`.
    #[arg(long = "form", default_value = "q1")]
    form: String,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a twist word to its integral symplectic matrix.
    Eval {
        #[command(flatten)]
        genus: GenusArg,
        /// Twist word, e.g. "C1 C2^-1 (C1 C2 C3 C4 C5)^6".
        word: String,
        #[arg(long)]
        json: bool,
    },
    /// Test whether a word stabilizes a quadratic form.
    Member {
        #[command(flatten)]
        genus: GenusArg,
        #[command(flatten)]
        form: FormArg,
        word: String,
        #[arg(long)]
        json: bool,
    },
    /// Test extendability over the connected sum of the cubic curve and
    /// the trivial surface (stabilization of the odd form).
    Extendable {
        #[command(flatten)]
        genus: GenusArg,
        word: String,
        #[arg(long)]
        json: bool,
    },
    /// Least class with form value zero, witnessing that the stabilizer is
    /// a proper subgroup.
    Witness {
        #[command(flatten)]
        genus: GenusArg,
        #[command(flatten)]
        form: FormArg,
        #[arg(long)]
        json: bool,
    },
    /// Generation certificate for the stabilizer of the odd form.
    Certify {
        #[command(flatten)]
        genus: GenusArg,
        #[arg(long)]
        json: bool,
    },
    /// Orders of the generated groups by breadth-first closure.
    Orders {
        #[command(flatten)]
        genus: GenusArg,
        /// Cap on closure size.
        #[arg(long, default_value_t = 2_000_000)]
        cap: usize,
        #[arg(long)]
        json: bool,
    },
    /// Enumerate the classes with form value one.
    Lambda {
        #[command(flatten)]
        genus: GenusArg,
        #[command(flatten)]
        form: FormArg,
        #[arg(long)]
        json: bool,
    },
    /// Factorize an odd subchain map into the generating set.
    Rewrite {
        #[command(flatten)]
        genus: GenusArg,
        /// Tack sequence, as indices "1,2,3,4" or bits "11110000".
        tacks: String,
        #[arg(long)]
        json: bool,
    },
    /// Verify a factorization certificate (JSON from a file or stdin).
    VerifyCert {
        /// Path of the certificate; reads stdin when omitted.
        file: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// The genus-2 table of Schreier generators, matrix-verified.
    Table1 {
        #[arg(long)]
        json: bool,
    },
    /// The genus-2 action graph on the odd forms.
    CosetGraph {
        #[arg(long)]
        json: bool,
    },
    /// Arf invariants: of a form, or of a Rokhlin form from signature data.
    Arf {
        /// Quadratic form basis values, like `[1,1,0,0]`.
        #[arg(long)]
        form: Option<String>,
        /// Signature of the ambient 4-manifold.
        #[arg(long)]
        sigma: Option<i64>,
        /// Self-intersection of the surface.
        #[arg(long = "self-intersection")]
        self_intersection: Option<i64>,
        #[arg(long)]
        json: bool,
    },
    /// Knotted-surface catalog entries, e.g. "cp2-Kd(3)" or
    /// "cp2-K3-sum(4)".
    Catalog {
        name: String,
        #[arg(long)]
        json: bool,
    },
    /// Square-transvection sweep: kernel membership plus word realizations.
    SquareTwists {
        #[command(flatten)]
        genus: GenusArg,
        #[arg(long)]
        json: bool,
    },
}

fn parse_form(text: &str, genus: Genus) -> Result<QuadraticForm> {
    let q = match text {
        "q0" => QuadraticForm::q0(genus),
        "q1" => QuadraticForm::q1(genus),
        other => QuadraticForm::parse(other)?,
    };
    if q.genus() != genus {
        return Err(anyhow!(
            "form {q} has genus {}, expected {genus}",
            q.genus()
        ));
    }
    Ok(q)
}

fn matrix_rows(m: &mcg_core::SymplecticMatrix) -> Vec<Vec<String>> {
    m.rows()
        .iter()
        .map(|row| row.iter().map(|e| e.to_string()).collect())
        .collect()
}

fn print_matrix(m: &mcg_core::SymplecticMatrix) {
    let rows = matrix_rows(m);
    let width = rows.iter().flatten().map(|e| e.len()).max().unwrap_or(1);
    for row in rows {
        let line: Vec<String> = row.iter().map(|e| format!("{e:>width$}")).collect();
        println!("[ {} ]", line.join(" "));
    }
}

fn run() -> Result<u8> {
    let cli = Cli::parse();
    match cli.command {
        Command::Eval { genus, word, json } => {
            let genus = Genus::new(genus.genus)?;
            let w = parse_word(&word, genus)?;
            let m = w.evaluate(genus)?;
            if json {
                println!(
                    "{}",
                    json!({
                        "word": print_word(&w),
                        "genus": genus.get(),
                        "matrix": matrix_rows(&m),
                        "symplectic": m.is_symplectic(),
                    })
                );
            } else {
                print_matrix(&m);
            }
            Ok(0)
        }
        Command::Member {
            genus,
            form,
            word,
            json,
        } => {
            let genus = Genus::new(genus.genus)?;
            let q = parse_form(&form.form, genus)?;
            let w = parse_word(&word, genus)?;
            let report = is_spin_member(&w, &q, genus)?;
            if json {
                println!("{}", serde_json::to_string(&report)?);
            } else if report.member {
                println!("member: {} stabilizes {q}", print_word(&w));
            } else {
                println!(
                    "non-member: {} moves {q}; failing class {}",
                    print_word(&w),
                    report.failing_class.unwrap()
                );
            }
            Ok(if report.member { 0 } else { 1 })
        }
        Command::Extendable { genus, word, json } => {
            let genus = Genus::new(genus.genus)?;
            let w = parse_word(&word, genus)?;
            let verdict = is_extendable_k3_sum(&w, genus)?;
            if json {
                println!(
                    "{}",
                    json!({
                        "word": print_word(&w),
                        "genus": genus.get(),
                        "extendable": verdict,
                        "criterion": "stabilizes the odd form of the connected-sum surface",
                    })
                );
            } else if verdict {
                println!(
                    "extendable: {} stabilizes the Rokhlin form of the connected-sum surface",
                    print_word(&w)
                );
            } else {
                println!(
                    "not extendable: {} moves the Rokhlin form of the connected-sum surface",
                    print_word(&w)
                );
            }
            Ok(if verdict { 0 } else { 1 })
        }
        Command::Witness { genus, form, json } => {
            let genus = Genus::new(genus.genus)?;
            let q = parse_form(&form.form, genus)?;
            match non_preserving_witness(&q, genus)? {
                Some((z, _)) => {
                    if json {
                        println!(
                            "{}",
                            json!({"form": q.to_string(), "witness": z.to_string()})
                        );
                    } else {
                        println!("witness: transvection about {z} moves {q} (form value 0)");
                    }
                    Ok(0)
                }
                None => {
                    if json {
                        println!("{}", json!({"form": q.to_string(), "witness": null}));
                    } else {
                        println!("no witness: every nonzero class has form value 1");
                    }
                    Ok(1)
                }
            }
        }
        Command::Certify { genus, json } => {
            let genus = Genus::new(genus.genus)?;
            let cert = certify_o_q1_generation(genus)?;
            let ok = cert.dictionary.all_ok() && cert.transitive;
            if json {
                println!("{}", serde_json::to_string_pretty(&cert)?);
            } else {
                println!(
                    "genus {}: dictionary {} entries ({}), {} reduction traces, transitive: {}",
                    cert.genus,
                    cert.dictionary.entries.len(),
                    if cert.dictionary.all_ok() {
                        "all verified"
                    } else {
                        "MISMATCH"
                    },
                    cert.traces.len(),
                    cert.transitive,
                );
                if let Some(orders) = &cert.orders {
                    println!(
                        "orders: generated {} = full {} / orbit {}",
                        orders.generated_group, orders.full_symplectic_group, orders.odd_form_orbit
                    );
                }
            }
            Ok(if ok { 0 } else { 1 })
        }
        Command::Orders { genus, cap, json } => {
            let genus = Genus::new(genus.genus)?;
            let twists = twist_images(genus)?;
            let full = group_order_bfs(&twists, cap)?;
            let gg: Vec<_> = gg_generators(genus)?
                .iter()
                .map(|w| w.evaluate_f2(genus))
                .collect::<mcg_core::Result<_>>()?;
            let stabilizer = group_order_bfs(&gg, cap)?;
            let orbit = form_orbit(&QuadraticForm::q1(genus), &twists).len();
            if json {
                println!(
                    "{}",
                    json!({
                        "genus": genus.get(),
                        "full_group": full,
                        "generated_group": stabilizer,
                        "odd_form_orbit": orbit,
                        "orbit_stabilizer_consistent": full == stabilizer * orbit,
                    })
                );
            } else {
                println!("full twist group (mod 2): {full}");
                println!("generated subgroup: {stabilizer}");
                println!("odd form orbit: {orbit}");
                println!(
                    "orbit-stabilizer: {} * {} = {} ({})",
                    stabilizer,
                    orbit,
                    stabilizer * orbit,
                    if full == stabilizer * orbit {
                        "consistent"
                    } else {
                        "INCONSISTENT"
                    }
                );
            }
            Ok(if full == stabilizer * orbit { 0 } else { 1 })
        }
        Command::Lambda { genus, form, json } => {
            let genus = Genus::new(genus.genus)?;
            let q = parse_form(&form.form, genus)?;
            let lambda = enumerate_lambda(&q)?;
            if json {
                println!(
                    "{}",
                    json!({
                        "form": q.to_string(),
                        "count": lambda.len(),
                        "classes": lambda.iter().map(|z| z.to_string()).collect::<Vec<_>>(),
                    })
                );
            } else {
                println!("{} classes with {q}-value 1:", lambda.len());
                for z in &lambda {
                    println!("  {z}");
                }
            }
            Ok(0)
        }
        Command::Rewrite { genus, tacks, json } => {
            let genus = Genus::new(genus.genus)?;
            let s = TackSequence::parse(&tacks, genus)?;
            let cert = factorize_tacks(&s)?;
            let report = verify_certificate(&cert)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&cert.to_json())?);
            } else {
                println!(
                    "factorized {} into {} generator leaves; verification {}",
                    s,
                    cert.root.leaf_count(),
                    if report.ok { "passed" } else { "FAILED" }
                );
            }
            Ok(if report.ok { 0 } else { 1 })
        }
        Command::VerifyCert { file, json } => {
            let text = match file {
                Some(path) => {
                    std::fs::read_to_string(&path).with_context(|| format!("reading {path}"))?
                }
                None => {
                    let mut buf = String::new();
                    std::io::stdin().read_to_string(&mut buf)?;
                    buf
                }
            };
            let value: serde_json::Value = serde_json::from_str(&text)?;
            let cert = FactorizationCertificate::from_json(&value)?;
            let report = verify_certificate(&cert)?;
            if json {
                println!(
                    "{}",
                    json!({
                        "ok": report.ok,
                        "identity": report.identity_ok,
                        "leaves": report.leaves,
                        "failures": report
                            .failures
                            .iter()
                            .map(|f| json!({"path": f.path, "message": f.message}))
                            .collect::<Vec<_>>(),
                    })
                );
            } else if report.ok {
                println!(
                    "certificate for {} verifies: {} leaves, identity action",
                    cert.input, report.leaves
                );
            } else {
                for f in &report.failures {
                    println!("FAIL at {}: {}", f.path, f.message);
                }
            }
            Ok(if report.ok { 0 } else { 1 })
        }
        Command::Table1 { json } => {
            let entries = schreier_table()?;
            let all_ok = entries.iter().all(|e| e.matrices_equal);
            if json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&table_to_json(&entries))?
                );
            } else {
                println!(
                    "{:<14} {:<4} {:<32} {:<30} verdict",
                    "coset rep", "gen", "computed", "table"
                );
                for e in &entries {
                    println!(
                        "{:<14} C{:<3} {:<32} {:<30} {}",
                        print_word(&e.row),
                        e.column,
                        print_word(&e.computed),
                        print_word(&e.table_word),
                        if e.matrices_equal {
                            "matrix-verified"
                        } else {
                            "MISMATCH"
                        }
                    );
                }
            }
            Ok(if all_ok { 0 } else { 1 })
        }
        Command::CosetGraph { json } => {
            let graph = CosetGraph::compute()?;
            if json {
                println!("{}", serde_json::to_string_pretty(&graph.to_json())?);
            } else {
                let (order, labels) = graph.path()?;
                for (k, q) in order.iter().enumerate() {
                    if k > 0 {
                        println!("  | C{}", labels[k - 1]);
                    }
                    println!("{q}");
                }
            }
            Ok(0)
        }
        Command::Arf {
            form,
            sigma,
            self_intersection,
            json,
        } => match (form, sigma, self_intersection) {
            (Some(text), None, None) => {
                let q = QuadraticForm::parse(&text)?;
                if json {
                    println!("{}", json!({"form": q.to_string(), "arf": q.arf()}));
                } else {
                    println!("Arf({q}) = {}", q.arf());
                }
                Ok(0)
            }
            (None, Some(s), Some(f)) => {
                let arf = arf_from_signature(s, f)?;
                if json {
                    println!("{}", json!({"sigma": s, "selfIntersection": f, "arf": arf}));
                } else {
                    println!("Arf = ({s} - {f})/8 mod 2 = {arf}");
                }
                Ok(0)
            }
            _ => Err(anyhow!(
                "pass either --form, or both --sigma and --self-intersection"
            )),
        },
        Command::Catalog { name, json } => {
            let data = surface_catalog(&name)?;
            if json {
                println!("{}", serde_json::to_string(&data)?);
            } else {
                println!(
                    "{}: sigma {}, self-intersection {}, genus {}, Arf {}",
                    data.name,
                    data.sigma,
                    data.self_intersection,
                    data.genus,
                    data.arf
                        .map(|a| a.to_string())
                        .unwrap_or_else(|| "undefined (not characteristic)".into())
                );
            }
            Ok(0)
        }
        Command::SquareTwists { genus, json } => {
            let genus = Genus::new(genus.genus)?;
            let report = verify_square_transvections(genus)?;
            let ok = report.all_in_kernel && report.all_words_match;
            if json {
                println!("{}", serde_json::to_string(&report)?);
            } else {
                println!(
                    "checked {} classes: kernel {}, word realizations {}",
                    report.checked,
                    if report.all_in_kernel {
                        "all pass"
                    } else {
                        "FAIL"
                    },
                    if report.all_words_match {
                        "all match"
                    } else {
                        "FAIL"
                    },
                );
            }
            Ok(if ok { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    // Die quietly when a downstream pipe closes (e.g. `mcg table1 | head`).
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    match run() {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
