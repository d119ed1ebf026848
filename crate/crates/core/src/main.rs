use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use mualg::completion::{
    complete_modal_structure, dm_completion, extend_left_adjoint, preservation_check,
    PreservationVerdict,
};
use mualg::counterexample::{wrongconf_verify, OrdElem, QuotSeq};
use mualg::covers::{
    automaton_reach, cover, cover_graph, descriptor_of_term, dia_right_adjoint,
    kleene_inverse_iteration, render_covers, Backend, CoverError, Descriptor, FinBackend,
    SyntacticBackend,
};
use mualg::formats::{
    parse_model, parse_poset, parse_system, print_model, print_poset, print_system,
};
use mualg::kripke::{eval, lfp_iterate, whitman_check, Env, KripkeModel, StateSet};
use mualg::lattice::FinLattice;
use mualg::suites::{run_suite, suite_names};
use mualg::syntax::{parse_term, parse_term_with_vars, print_term};
use mualg::systems::{
    bekic_solve, classify_system, compile_sigma1, generator_env, guard_system, powerset_translate,
    regular_harness, simultaneous_solve, unravel_to_simple, System,
};
use mualg::term::{classify, fl_closure, guard, modal_cnf, nnf, Literal, Name, Term};

/// Workbench for the modal mu-calculus.
///
/// Inputs are read from FILE, from `-e TEXT`, or from standard input.
/// Exit status: 0 on success, 1 when a check fails, 2 on usage or parse errors.
#[derive(Parser)]
#[command(name = "mualg", version)]
struct Cli {
    /// Seed for every randomized command.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Sample count or search limit; each command documents its default.
    #[arg(long, global = true)]
    budget: Option<usize>,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Input {
    /// Input file (`-` or absent: standard input).
    file: Option<PathBuf>,
    /// Inline input text.
    #[arg(short = 'e', long = "expr", conflicts_with = "file")]
    expr: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Term,
    Model,
    System,
    Poset,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a document and show its structure.
    Parse {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value = "term")]
        format: Format,
    },
    /// Parse a document and print it canonically.
    Print {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value = "term")]
        format: Format,
    },
    /// Negation normal form.
    Nnf {
        #[command(flatten)]
        input: Input,
    },
    /// Guarded form of a term, or of a system with `--system`.
    Guard {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        system: bool,
    },
    /// Fischer-Ladner closure, one member per line.
    Flclosure {
        #[command(flatten)]
        input: Input,
    },
    /// Fixed-point fragment of a term.
    Classify {
        #[command(flatten)]
        input: Input,
    },
    /// Modal conjunctive normal form, one clause per line.
    Cnf {
        #[command(flatten)]
        input: Input,
    },
    /// Denotation of a term in a model.
    Eval {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        model: PathBuf,
    },
    /// Approximants of a least fixed point term `mu x . body`.
    Approx {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        model: PathBuf,
    },
    /// Elementary system for a sigma1 term.
    Compile {
        #[command(flatten)]
        input: Input,
    },
    /// Solve a system by elimination and by joint iteration.
    Bekic {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        model: PathBuf,
    },
    /// Simple system equivalent to an elementary one.
    Unravel {
        #[command(flatten)]
        input: Input,
    },
    /// Disjunctive-simple system over the nonempty subsets of the variables.
    Powerset {
        #[command(flatten)]
        input: Input,
    },
    /// Covers of a map (a term over `--vars`) below a target.
    Covers {
        #[command(flatten)]
        map: MapArgs,
        /// Comma-separated targets, one per output coordinate.
        #[arg(long)]
        target: String,
    },
    /// Right adjoint of a diamond at a term; `--star` iterates it.
    Adjoint {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value = "a")]
        action: String,
        #[arg(long)]
        star: bool,
    },
    /// Cover graph and covers of `mu VAR . MAP` below a target.
    Mucover {
        #[command(flatten)]
        map: MapArgs,
        /// The bound variable; must be the last of `--vars`.
        #[arg(long)]
        var: String,
        #[arg(long)]
        target: String,
    },
    /// States reachable through covers of a family of maps from seeds.
    Reach {
        /// Each map takes one argument, `x`.
        #[arg(long = "map", required = true)]
        maps: Vec<String>,
        #[arg(long = "from", required = true)]
        seeds: Vec<String>,
        #[arg(long)]
        model: Option<PathBuf>,
    },
    /// Dedekind-MacNeille completion of a poset.
    Complete {
        #[command(flatten)]
        input: Input,
    },
    /// Compare `mu VAR . BODY` in a poset and in its completion.
    Preserve {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        body: String,
        #[arg(long, default_value = "x")]
        var: String,
        /// Generator values, `p=elem`.
        #[arg(long = "set")]
        sets: Vec<String>,
    },
    /// Certificate in the product with the two-element algebra.
    Whitman {
        #[arg(long)]
        model: PathBuf,
        /// Literals such as `p` or `~q`.
        #[arg(long = "lit")]
        literals: Vec<String>,
        /// `action:term` entries.
        #[arg(long = "y")]
        ys: Vec<String>,
    },
    /// Two-variable harness for maps f(x, y) and g(x, y).
    Harness {
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
        #[arg(long)]
        model: PathBuf,
        #[arg(long, default_value_t = 10)]
        depth: usize,
    },
    /// Replay of the reduced-power configuration up to `--budget` (default 100).
    Counterexample,
    /// Run an acceptance suite (`all` runs every suite).
    Suite { name: String },
}

#[derive(Args)]
struct MapArgs {
    /// The map, as comma-separated terms (one per output coordinate).
    #[arg(long)]
    map: String,
    /// Comma-separated argument variables, in coordinate order.
    #[arg(long)]
    vars: String,
    /// Work in the powerset algebra of this model instead of on terms.
    #[arg(long)]
    model: Option<PathBuf>,
}

/// Usage/parse errors (exit 2) versus failed checks (exit 1).
enum Failure {
    Usage(String),
    Check(String),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Failure {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<String, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (report, code) = match run(&cli) {
        Ok(text) => (text, 0),
        Err(Failure::Check(text)) => (text, 1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &report) {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{report}"),
    }
    ExitCode::from(code)
}

fn read(input: &Input) -> Result<String, Failure> {
    if let Some(text) = &input.expr {
        return Ok(text.clone());
    }
    match &input.file {
        Some(p) if p.as_os_str() != "-" => {
            std::fs::read_to_string(p).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))
        }
        _ => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s)?;
            Ok(s)
        }
    }
}

fn read_term(input: &Input) -> Result<Term, Failure> {
    Ok(parse_term(read(input)?.trim())?)
}

fn read_model(path: &PathBuf) -> Result<KripkeModel, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    Ok(parse_model(&text, None)?)
}

fn read_system(input: &Input) -> Result<System, Failure> {
    Ok(parse_system(&read(input)?)?)
}

fn lines<T>(items: impl IntoIterator<Item = T>, show: impl Fn(T) -> String) -> String {
    items.into_iter().map(|t| show(t) + "\n").collect()
}

fn show_assignment(m: &KripkeModel, a: &BTreeMap<Name, StateSet>) -> String {
    lines(a, |(x, v)| format!("{x} = {}", m.show(*v)))
}

fn check(ok: bool, text: String) -> Outcome {
    if ok {
        Ok(text)
    } else {
        Err(Failure::Check(text))
    }
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Parse { input, format } => parse_cmd(&read(input)?, *format),
        Command::Print { input, format } => print_cmd(&read(input)?, *format),
        Command::Nnf { input } => Ok(print_term(&nnf(&read_term(input)?)) + "\n"),
        Command::Guard {
            input,
            system: false,
        } => Ok(print_term(&guard(&nnf(&read_term(input)?))) + "\n"),
        Command::Guard {
            input,
            system: true,
        } => {
            let (g, steps) = guard_system(&read_system(input)?)?;
            let mut out = lines(&steps, |s| format!("# {:?} on {}", s.kind, s.variable));
            out.push_str(&print_system(&g));
            Ok(out)
        }
        Command::Flclosure { input } => {
            Ok(lines(fl_closure(&read_term(input)?).iter(), print_term))
        }
        Command::Classify { input } => Ok(format!("{:?}\n", classify(&read_term(input)?))),
        Command::Cnf { input } => Ok(lines(modal_cnf(&nnf(&read_term(input)?))?, |c| {
            print_term(&c.to_term())
        })),
        Command::Eval { input, model } => {
            let m = read_model(model)?;
            Ok(m.show(eval(&m, &read_term(input)?, &Env::new())?) + "\n")
        }
        Command::Approx { input, model } => {
            let m = read_model(model)?;
            let Term::Mu(x, body) = read_term(input)? else {
                return Err(Failure::Usage("expected a term `mu x . body`".into()));
            };
            let trace = lfp_iterate(&m, &body, &x, &Env::new())?;
            let mut out = String::new();
            for (i, s) in trace.stages.iter().enumerate() {
                let _ = writeln!(out, "stage {i}: {}", m.show(*s));
            }
            let _ = writeln!(out, "stabilized at {}", trace.stabilized_at());
            Ok(out)
        }
        Command::Compile { input } => {
            let (s, x) = compile_sigma1(&nnf(&read_term(input)?))?;
            Ok(format!("# designated: {x}\n{}", print_system(&s)))
        }
        Command::Bekic { input, model } => {
            let m = read_model(model)?;
            let s = read_system(input)?;
            let env = generator_env(&m, &s);
            let elim = bekic_solve(&s, &m, &env)?;
            let (joint, trace) = simultaneous_solve(&s, &m, &env)?;
            let mut out = format!("# elimination\n{}", show_assignment(&m, &elim));
            let _ = write!(
                out,
                "# joint iteration ({} stages)\n{}",
                trace.stabilized_at(),
                show_assignment(&m, &joint)
            );
            let same = elim == joint;
            let _ = writeln!(out, "agree: {same}");
            check(same, out)
        }
        Command::Unravel { input } => {
            let (s, origin) = unravel_to_simple(&read_system(input)?)?;
            let mut out = lines(&origin, |(v, o)| format!("# {v} from {o}"));
            out.push_str(&print_system(&s));
            Ok(out)
        }
        Command::Powerset { input } => {
            let s = read_system(input)?;
            let class = classify_system(&s);
            let t = powerset_translate(&s)?;
            Ok(format!(
                "# source class: {class:?}\n{}",
                print_system(&t.target)
            ))
        }
        Command::Covers { map, target } => covers_cmd(map, target, None),
        Command::Mucover { map, var, target } => covers_cmd(map, target, Some(var)),
        Command::Adjoint {
            input,
            action,
            star: false,
        } => Ok(print_term(&dia_right_adjoint(
            action,
            &modal_cnf(&nnf(&read_term(input)?))?,
        )) + "\n"),
        Command::Adjoint {
            input,
            action,
            star: true,
        } => {
            let it = kleene_inverse_iteration(
                action,
                &nnf(&read_term(input)?),
                cli.budget.unwrap_or(64),
            )?;
            let mut out = lines(it.iterates.iter().enumerate(), |(i, t)| {
                format!("iterate {i}: {}", print_term(t))
            });
            let _ = writeln!(out, "meet: {}", print_term(&it.meet));
            let _ = writeln!(out, "steps: {} (closure size {})", it.steps(), it.fl_size);
            check(it.stabilized, out)
        }
        Command::Reach { maps, seeds, model } => reach_cmd(maps, seeds, model.as_ref(), cli.budget),
        Command::Complete { input } => {
            let p = parse_poset(&read(input)?)?;
            let c = dm_completion(&p)?;
            let mut out = c.dump();
            if !p.ops.is_empty() {
                let l = complete_modal_structure(&c)?;
                for (a, table) in &l.ops {
                    let _ = writeln!(
                        out,
                        "op {a}: {}",
                        lines(table.iter().enumerate(), |(i, j)| format!(
                            "{}->{}",
                            l.labels[i], l.labels[*j]
                        ))
                        .trim_end()
                        .replace('\n', " ")
                    );
                }
                for (a, f) in &p.ops {
                    let e = extend_left_adjoint(&c, f)?;
                    let _ = writeln!(
                        out,
                        "adjoint {a}: {}",
                        lines(e.right.iter().enumerate(), |(i, j)| format!(
                            "{}->{}",
                            l.labels[i], l.labels[*j]
                        ))
                        .trim_end()
                        .replace('\n', " ")
                    );
                }
            }
            Ok(out)
        }
        Command::Preserve {
            input,
            body,
            var,
            sets,
        } => {
            let p = parse_poset(&read(input)?)?;
            let c = dm_completion(&p)?;
            let body = parse_term_with_vars(body, &BTreeSet::from([var.clone()]))?;
            let mut env = BTreeMap::new();
            for s in sets {
                let (g, e) = s
                    .split_once('=')
                    .ok_or_else(|| Failure::Usage(format!("expected `gen=elem`, found `{s}`")))?;
                let i = p
                    .index(e.trim())
                    .ok_or_else(|| Failure::Usage(format!("unknown element `{e}`")))?;
                env.insert(g.trim().to_string(), i);
            }
            let r = preservation_check(&c, &body, var, &env)?;
            let mut out = format!("verdict: {:?}\n", r.verdict);
            let _ = writeln!(
                out,
                "poset: {}",
                r.source
                    .iter()
                    .map(|&i| p.elements[i].clone())
                    .collect::<Vec<_>>()
                    .join(" ")
            );
            let _ = writeln!(
                out,
                "completion: {}",
                r.target
                    .iter()
                    .map(|&i| c.lattice.labels[i].clone())
                    .collect::<Vec<_>>()
                    .join(" ")
            );
            check(
                !matches!(r.verdict, PreservationVerdict::Violated { .. }),
                out,
            )
        }
        Command::Whitman {
            model,
            literals,
            ys,
        } => {
            let m = read_model(model)?;
            let lambda = literals
                .iter()
                .map(|l| Ok(Literal::from_term(&parse_term(l)?)?))
                .collect::<Result<Vec<_>, Failure>>()?;
            let mut table: BTreeMap<Name, Vec<Term>> = BTreeMap::new();
            for y in ys {
                let (a, t) = y.split_once(':').ok_or_else(|| {
                    Failure::Usage(format!("expected `action:term`, found `{y}`"))
                })?;
                table
                    .entry(a.trim().to_string())
                    .or_default()
                    .push(parse_term(t)?);
            }
            let r = whitman_check(&lambda, &table, None, &m)?;
            check(
                r.certified(),
                format!("{r:?}\ncertified: {}\n", r.certified()),
            )
        }
        Command::Harness { f, g, model, depth } => {
            let m = read_model(model)?;
            let vars = BTreeSet::from(["x".to_string(), "y".to_string()]);
            let (f, g) = (
                parse_term_with_vars(f, &vars)?,
                parse_term_with_vars(g, &vars)?,
            );
            let (trace, v) = regular_harness(&f, &g, &m, &Env::new(), *depth, None)?;
            let mut out = String::new();
            for (n, ((fx, gy), (h, i))) in trace.joint.iter().zip(&trace.direct).enumerate() {
                let _ = writeln!(
                    out,
                    "n={n}: joint ({}, {}) direct ({}, {}) words {}",
                    m.show(*fx),
                    m.show(*gy),
                    m.show(*h),
                    m.show(*i),
                    trace.levels[n].len()
                );
            }
            let _ = writeln!(out, "{v:?}");
            check(v.all(), out)
        }
        Command::Counterexample => {
            let candidates = [
                QuotSeq::constant(OrdElem::BOT),
                QuotSeq::constant(OrdElem::Nat(1)),
                QuotSeq::constant(OrdElem::Omega),
                QuotSeq::phi(0),
                QuotSeq::mu(),
            ];
            let r = wrongconf_verify(cli.budget.unwrap_or(100) as u64, &candidates);
            check(r.certified(), r.render())
        }
        Command::Suite { name } => {
            let names: Vec<&str> = if name == "all" {
                suite_names()
            } else {
                vec![name.as_str()]
            };
            let mut out = String::new();
            let mut ok = true;
            for n in names {
                let r = run_suite(n, cli.seed, cli.budget)?;
                ok &= r.passed();
                out.push_str(&r.render());
            }
            check(ok, out)
        }
    }
}

fn parse_cmd(text: &str, format: Format) -> Outcome {
    Ok(match format {
        Format::Term => {
            let t = parse_term(text.trim())?;
            let mut out = String::new();
            outline(&t, 0, &mut out);
            out
        }
        Format::Model => {
            let m = parse_model(text, None)?;
            let acts: Vec<&Name> = m.relations.keys().collect();
            format!(
                "{} states, actions {:?}, generators {:?}\n",
                m.len(),
                acts,
                m.valuation.keys().collect::<Vec<_>>()
            )
        }
        Format::System => {
            let s = parse_system(text)?;
            format!(
                "bound {:?}, free {:?}\n{:?}\n",
                s.bound,
                s.free,
                classify_system(&s)
            )
        }
        Format::Poset => {
            let p = parse_poset(text)?;
            format!(
                "{} elements, lattice: {}, ops {:?}\n",
                p.len(),
                p.is_lattice(),
                p.ops.keys().collect::<Vec<_>>()
            )
        }
    })
}

fn outline(t: &Term, depth: usize, out: &mut String) {
    let head = match t {
        Term::Gen(p) => format!("gen {p}"),
        Term::Var(x) => format!("var {x}"),
        Term::Top => "top".into(),
        Term::Bot => "bot".into(),
        Term::And(..) => "and".into(),
        Term::Or(..) => "or".into(),
        Term::Not(_) => "not".into(),
        Term::Dia(a, _) => format!("dia {a}"),
        Term::Nec(a, _) => format!("box {a}"),
        Term::Mu(x, _) => format!("mu {x}"),
        Term::Nu(x, _) => format!("nu {x}"),
        Term::Arrow(a, _) => format!("arrow {a}"),
    };
    let _ = writeln!(out, "{}{head}", "  ".repeat(depth));
    for c in t.children() {
        outline(c, depth + 1, out);
    }
}

fn print_cmd(text: &str, format: Format) -> Outcome {
    Ok(match format {
        Format::Term => print_term(&parse_term(text.trim())?) + "\n",
        Format::Model => print_model(&parse_model(text, None)?),
        Format::System => print_system(&parse_system(text)?),
        Format::Poset => print_poset(&parse_poset(text)?),
    })
}

fn split_list(s: &str) -> Vec<String> {
    s.split(',')
        .map(|x| x.trim().to_string())
        .filter(|x| !x.is_empty())
        .collect()
}

/// The map's descriptor together with the parsed targets, on one backend.
fn build<E: Clone>(
    map: &MapArgs,
    target: &str,
    constant: &mut dyn FnMut(&Term) -> Result<E, CoverError>,
) -> Result<(Descriptor<E>, Vec<E>), Failure> {
    let vars = split_list(&map.vars);
    let declared: BTreeSet<Name> = vars.iter().cloned().collect();
    let outputs = split_list(&map.map)
        .iter()
        .map(|t| {
            Ok(descriptor_of_term(
                &parse_term_with_vars(t, &declared)?,
                &vars,
                constant,
            )?)
        })
        .collect::<Result<Vec<_>, Failure>>()?;
    let d = if outputs.len() == 1 {
        outputs.into_iter().next().expect("one")
    } else {
        Descriptor::Pair(outputs)
    };
    let targets = split_list(target)
        .iter()
        .map(|t| Ok(constant(&parse_term(t)?)?))
        .collect::<Result<Vec<_>, Failure>>()?;
    Ok((d, targets))
}

fn covers_with<B: Backend>(
    b: &B,
    d: Descriptor<B::Elem>,
    targets: Vec<B::Elem>,
    mu: Option<usize>,
) -> Outcome {
    let Some(n) = mu else {
        return Ok(render_covers(b, &cover(b, &d, &targets)?));
    };
    if targets.len() != 1 {
        return Err(Failure::Usage("a least fixed point has one output".into()));
    }
    let g = cover_graph(b, &d, n, &targets[0], mualg::covers::DEFAULT_BUDGET)?;
    let mut out = String::new();
    for (i, v) in g.vertices.iter().enumerate() {
        let _ = writeln!(out, "vertex {i}: {}", b.show(v));
    }
    for e in &g.edges {
        let label: Vec<String> = e.label.iter().map(|x| b.show(x)).collect();
        let _ = writeln!(out, "edge {} -> {} [{}]", e.from, e.to, label.join(" ; "));
    }
    out.push_str("covers:\n");
    out.push_str(&render_covers(
        b,
        &cover(b, &Descriptor::mu(d, n), &targets)?,
    ));
    Ok(out)
}

fn covers_cmd(map: &MapArgs, target: &str, mu: Option<&String>) -> Outcome {
    let bound = match mu {
        None => None,
        Some(v) => {
            let vars = split_list(&map.vars);
            if vars.last() != Some(v) {
                return Err(Failure::Usage(format!("`{v}` must be the last of --vars")));
            }
            Some(vars.len() - 1)
        }
    };
    match &map.model {
        None => {
            let mut k = |t: &Term| Ok(t.clone());
            let (d, targets) = build(map, target, &mut k)?;
            covers_with(&SyntacticBackend, d, targets, bound)
        }
        Some(path) => {
            let m = read_model(path)?;
            let fb = FinBackend::new(FinLattice::powerset(&m)?);
            let mut k = |t: &Term| Ok(eval(&m, t, &Env::new())?.0 as usize);
            let (d, targets) = build(map, target, &mut k)?;
            covers_with(&fb, d, targets, bound)
        }
    }
}

fn reach_cmd(
    maps: &[String],
    seeds: &[String],
    model: Option<&PathBuf>,
    budget: Option<usize>,
) -> Outcome {
    let vars = vec!["x".to_string()];
    let declared: BTreeSet<Name> = vars.iter().cloned().collect();
    let budget = budget.unwrap_or(mualg::covers::DEFAULT_BUDGET);
    fn go<B: Backend>(
        b: &B,
        maps: &[Term],
        seeds: &[String],
        vars: &[Name],
        budget: usize,
        k: &mut dyn FnMut(&Term) -> Result<B::Elem, CoverError>,
    ) -> Outcome {
        let family = maps
            .iter()
            .map(|t| descriptor_of_term(t, vars, k))
            .collect::<Result<Vec<_>, _>>()?;
        let seeds = seeds
            .iter()
            .map(|s| Ok(k(&parse_term(s)?)?))
            .collect::<Result<Vec<_>, Failure>>()?;
        let r = automaton_reach(b, &family, &seeds, budget)?;
        let mut out = lines(&r.states, |s| b.show(s));
        let _ = writeln!(out, "closed: {}", r.closed);
        check(r.closed, out)
    }
    let terms = maps
        .iter()
        .map(|t| parse_term_with_vars(t, &declared))
        .collect::<Result<Vec<_>, _>>()?;
    match model {
        None => go(&SyntacticBackend, &terms, seeds, &vars, budget, &mut |t| {
            Ok(t.clone())
        }),
        Some(path) => {
            let m = read_model(path)?;
            let fb = FinBackend::new(FinLattice::powerset(&m)?);
            go(&fb, &terms, seeds, &vars, budget, &mut |t| {
                Ok(eval(&m, t, &Env::new())?.0 as usize)
            })
        }
    }
}
