mod output;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::Zero;
use serde_json::json;

use dgorder::catalog::{build, Params};
use dgorder::classgroup::{
    class_group_conductor_square, classical_maximal_order, cl_hi_sequence, dg_idele_class_group,
    mv_exactness_check, CycleOrderKind,
};
use dgorder::format::{parse, write, AlgebraFile};
use dgorder::graded::{central_homogeneous_idempotents, verify_dg_algebra, DgAlgebra};
use dgorder::homology::{algebra_homology, homology_ring, HomologyPresentation};
use dgorder::ideals::{dg_radicals, dg_simple_modules};
use dgorder::linalg::ZLattice;
use dgorder::module::verify_dg_module;
use dgorder::orders::{check_dg_order, dg_maximal_hull, is_dg_lattice, is_dg_order, DgOrder};
use dgorder::report::format_vector;
use dgorder::{CoefficientRing, Error, Q};

use output::{integer, vector, Report};

#[derive(Parser)]
#[command(name = "dgorder", version, about = "Exact computations for dg-algebras, dg-orders and their class groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Input {
    /// Algebra description file.
    file: PathBuf,
    /// Emit the machine-readable JSON report.
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum HomologyRing {
    #[value(name = "Z")]
    Z,
    #[value(name = "Q")]
    Q,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Classical,
    Dg,
    Mv,
}

#[derive(Subcommand)]
enum Command {
    /// Check the dg-algebra axioms, the order and module blocks.
    Verify(Input),
    /// Homology per degree: free rank and torsion factors.
    Homology {
        #[command(flatten)]
        input: Input,
        /// Coefficients; Z uses the order when one is given.
        #[arg(long, value_enum)]
        ring: Option<HomologyRing>,
    },
    /// Left, right and two-sided dg-radicals.
    Radicals(Input),
    /// dg-simple modules up to shift.
    Simples(Input),
    /// dg-maximal hull of the order.
    Hull(Input),
    /// Class group of the order.
    Classgroup {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value = "classical")]
        mode: Mode,
    },
    /// Write a catalog example as an algebra file.
    Example {
        name: String,
        /// Parameters as key=value (x, p, k, a11, a21, ring, order=standard).
        params: Vec<String>,
        /// Output path; stdout when omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

enum Failure {
    Usage(String),
    Library(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Library(e)
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

fn load(path: &PathBuf) -> Outcome<AlgebraFile> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    Ok(parse(&text)?)
}

/// The order of the file, after its checks pass; a failing check is
/// recorded on the report and yields `None`.
fn order_of(file: &AlgebraFile, report: &mut Report) -> Outcome<Option<DgOrder>> {
    let l = file
        .order
        .as_ref()
        .ok_or_else(|| Failure::Usage("the file has no order section".into()))?;
    let check = check_dg_order(&file.dg, l)?;
    if let Some(f) = check.first_failure() {
        report.line(check.to_string().trim_end());
        report.fail(f.check.name());
        return Ok(None);
    }
    Ok(Some(is_dg_order(&file.dg, l)?))
}

fn verify(file: &AlgebraFile) -> Outcome<Report> {
    let mut r = Report::new("verify");
    let dg = &file.dg;
    r.degrees = dg.algebra.degrees().iter().map(|d| json!(d)).collect();
    r.line(format!("ring {}, dimension {}", dg.ring(), dg.dim()));
    let axioms = verify_dg_algebra(&dg.algebra, &dg.differential)?;
    r.line(axioms.to_string().trim_end());
    if let Some(f) = axioms.failures().next() {
        r.fail(f.axiom.name());
    }
    let mut order = None;
    if let Some(l) = &file.order {
        r.line("order:");
        let check = check_dg_order(dg, l)?;
        r.line(check.to_string().trim_end());
        match check.first_failure() {
            Some(f) => r.fail(f.check.name()),
            None => order = Some(is_dg_order(dg, l)?),
        }
        r.set("proper", json!(check.proper));
    }
    for block in &file.modules {
        r.line(format!("module {}:", block.name));
        let m = verify_dg_module(&block.module);
        r.line(m.to_string().trim_end());
        if let Some(f) = m.failures().next() {
            r.fail(f.axiom.name());
        }
        if let (Some(l), Some(o)) = (&block.lattice, &order) {
            let ok = is_dg_lattice(o, &block.module, l);
            r.line(format!("{:<14} {}", "dg-lattice", if ok { "pass" } else { "FAIL" }));
            if !ok {
                r.fail("dg-lattice");
            }
        }
    }
    Ok(r)
}

/// Coordinates of an order-basis vector in the ambient algebra.
fn ambient(order: &DgOrder, v: &[Q]) -> Vec<Q> {
    let mut out = vec![Q::zero(); order.lattice().ambient()];
    for (c, b) in v.iter().zip(order.basis()) {
        for (x, y) in out.iter_mut().zip(b) {
            *x += c * y;
        }
    }
    out
}

fn homology(file: &AlgebraFile, ring: Option<HomologyRing>) -> Outcome<Report> {
    let mut r = Report::new("homology");
    let mut order = None;
    let target: DgAlgebra = match ring {
        None => (*file.dg).clone(),
        Some(HomologyRing::Q) => file.dg.change_ring(CoefficientRing::Rationals)?,
        Some(HomologyRing::Z) if file.order.is_some() => match order_of(file, &mut r)? {
            Some(o) => {
                let za = o.integral_algebra();
                order = Some(o);
                za
            }
            None => return Ok(r),
        },
        Some(HomologyRing::Z) => file.dg.change_ring(CoefficientRing::Integers)?,
    };
    let names = file.dg.algebra.names();
    let to_ambient = |v: &[Q]| match &order {
        Some(o) => ambient(o, v),
        None => v.to_vec(),
    };
    let h: HomologyPresentation = algebra_homology(&target)?;
    r.line(format!("homology over {}", target.ring()));
    r.line(format!("{:>6}  {:>4}  torsion", "degree", "rank"));
    let mut per_degree: Vec<_> = h.per_degree.iter().filter(|d| !d.is_zero()).collect();
    per_degree.sort_by_key(|d| d.degree);
    for d in &per_degree {
        let torsion: Vec<String> = d.torsion().iter().map(|t| t.to_string()).collect();
        r.line(format!("{:>6}  {:>4}  [{}]", d.degree, d.free_rank(), torsion.join(", ")));
        r.degrees.push(json!({
            "degree": d.degree,
            "free_rank": d.free_rank(),
            "torsion": d.torsion().iter().map(integer).collect::<Vec<_>>(),
        }));
        r.invariant_factors.extend(d.torsion().iter().map(integer));
    }
    if per_degree.is_empty() {
        r.line("acyclic");
    }
    let classes = h.classes();
    for (i, c) in classes.iter().enumerate() {
        let v = to_ambient(&c.representative);
        let order_label = if c.order.is_zero() { "free".to_string() } else { format!("order {}", c.order) };
        r.line(format!("c{i} (degree {}, {order_label}) = {}", c.degree, format_vector(names, &v)));
        r.generators.push(json!({
            "degree": c.degree,
            "order": integer(&c.order),
            "representative": vector(&v),
        }));
    }
    if !classes.is_empty() {
        let ring = homology_ring(&target)?;
        let labels: Vec<String> = (0..ring.classes.len()).map(|i| format!("c{i}")).collect();
        let mut products = Vec::new();
        for (i, row) in ring.product.iter().enumerate() {
            for (j, p) in row.iter().enumerate() {
                r.line(format!("c{i} * c{j} = {}", format_vector(&labels, p)));
                products.push(json!({"left": i, "right": j, "product": vector(p)}));
            }
        }
        r.set("products", json!(products));
    }
    Ok(r)
}

fn basis_lines(r: &mut Report, label: &str, names: &[String], basis: &[Vec<Q>]) {
    let shown: Vec<String> = basis.iter().map(|v| format_vector(names, v)).collect();
    r.line(format!("{label} (dim {}): [{}]", basis.len(), shown.join(", ")));
    r.generators.push(json!({
        "name": label,
        "basis": basis.iter().map(|v| vector(v)).collect::<Vec<_>>(),
    }));
}

fn radicals(file: &AlgebraFile) -> Outcome<Report> {
    let mut r = Report::new("radicals");
    let names = file.dg.algebra.names();
    let rad = dg_radicals(&file.dg)?;
    r.line(format!("{} dg-maximal left ideals", rad.maximal_left.len()));
    basis_lines(&mut r, "dgrad_l", names, rad.left.basis());
    basis_lines(&mut r, "dgrad_r", names, rad.right.basis());
    basis_lines(&mut r, "dgrad_2", names, rad.two.basis());
    let lr = rad.left.intersect(&rad.right);
    basis_lines(&mut r, "dgrad_l n dgrad_r", names, lr.basis());
    r.set("maximal_left_ideals", json!(rad.maximal_left.len()));
    Ok(r)
}

fn simples(file: &AlgebraFile) -> Outcome<Report> {
    let mut r = Report::new("simples");
    let list = dg_simple_modules(&file.dg)?;
    r.line(format!("{} dg-simple modules up to shift", list.len()));
    for (i, s) in list.iter().enumerate() {
        r.line(format!("S{i}: dimension {}, degrees {:?}", s.dim(), s.degrees()));
        r.degrees.push(json!(s.degrees()));
        r.generators.push(json!({
            "dimension": s.dim(),
            "degrees": s.degrees(),
            "differential": (0..s.dim()).map(|j| vector(&s.differential().col(j))).collect::<Vec<_>>(),
        }));
    }
    Ok(r)
}

fn hull(file: &AlgebraFile) -> Outcome<Report> {
    let mut r = Report::new("hull");
    let Some(order) = order_of(file, &mut r)? else {
        return Ok(r);
    };
    let names = file.dg.algebra.names();
    let h = dg_maximal_hull(&order)?;
    for m in &h.moves {
        r.line(format!("move: {m}"));
    }
    if h.moves.is_empty() {
        r.line("no moves: the order is dg-maximal");
    }
    for p in &h.skipped_primes {
        r.caveats.push(format!("prime {p} divides the discriminant but was not tried"));
    }
    r.line(format!("degrees {:?}", h.order.degrees()));
    for b in h.order.basis() {
        r.line(format!("  {}", format_vector(names, b)));
        r.generators.push(vector(b));
    }
    r.degrees = h.order.degrees().iter().map(|d| json!(d)).collect();
    r.line(format!("reduced discriminant {}", h.discriminant));
    r.line(format!("classically maximal: {}", h.classically_maximal));
    r.set("discriminant", json!(h.discriminant.to_string()));
    r.set("classically_maximal", json!(h.classically_maximal));
    r.set(
        "moves",
        json!(h.moves.iter().map(|m| json!({
            "prime": m.prime,
            "side": format!("{:?}", m.side).to_lowercase(),
            "index": m.index.to_string(),
        })).collect::<Vec<_>>()),
    );
    Ok(r)
}

fn classgroup(file: &AlgebraFile, mode: Mode) -> Outcome<Report> {
    let mut r = Report::new("classgroup");
    let Some(order) = order_of(file, &mut r)? else {
        return Ok(r);
    };
    match mode {
        Mode::Classical => {
            let gamma = classical_maximal_order(&order)?;
            let rep = class_group_conductor_square(&order, &gamma)?;
            r.line(format!("class group: {}", rep.group));
            r.line(format!("conductor: {}", rep.conductor));
            r.line(format!("units of the maximal order mod conductor: {}", rep.unit_group_order));
            r.invariant_factors = rep.group.invariant_factors().iter().map(|d| json!(d)).collect();
            r.caveats = rep.caveats;
            r.set("conductor", json!(rep.conductor));
            r.set("order", json!(rep.group.order().to_string()));
        }
        Mode::Dg => {
            let rep = dg_idele_class_group(&order)?;
            r.line(format!("idele class group of the cycle order: {}", rep.upper_bound));
            match &rep.exact {
                Some(g) => r.line(format!("dg class group: {g}")),
                None => r.line("dg class group: a quotient of the group above"),
            }
            r.line(format!("conductor: {}", rep.conductor));
            r.line(format!("cycle order rank: {}", rep.cycle_rank));
            let kind = match rep.kind {
                CycleOrderKind::Commutative { reduced_rank } => format!("commutative, {reduced_rank} split factors"),
                CycleOrderKind::Classical => "classical".into(),
            };
            r.line(format!("cycle order: {kind}"));
            r.invariant_factors = rep.upper_bound.invariant_factors().iter().map(|d| json!(d)).collect();
            r.caveats = rep.caveats;
            r.set("exact", json!(rep.exact.as_ref().map(|g| g.invariant_factors().to_vec())));
            r.set("conductor", json!(rep.conductor));
        }
        Mode::Mv => {
            let ids = central_homogeneous_idempotents(&file.dg)?;
            let names = file.dg.algebra.names();
            if ids.primitive.len() < 2 {
                r.line("no central idempotent splits the algebra");
            }
            let mut squares = Vec::new();
            for e in &ids.primitive {
                let m = mv_exactness_check(&order, e)?;
                r.line(format!("e = {}", format_vector(names, e)));
                r.line(format!(
                    "  quotient units {}, cycle units {}, image of component units {}, delta image {}",
                    m.quotient_units,
                    m.cycle_units,
                    m.image_order,
                    m.delta_image_order()
                ));
                r.line(format!("  exact: {}", m.holds()));
                if !m.holds() {
                    r.fail("mayer-vietoris exactness");
                }
                for c in &m.caveats {
                    if !r.caveats.contains(c) {
                        r.caveats.push(c.clone());
                    }
                }
                squares.push(json!({
                    "idempotent": vector(e),
                    "split": m.split,
                    "quotient_units": m.quotient_units,
                    "cycle_units": m.cycle_units,
                    "image_order": m.image_order,
                    "delta_image_order": m.delta_image_order(),
                    "exact": m.holds(),
                }));
            }
            r.set("squares", json!(squares));
            match cl_hi_sequence(&order) {
                Ok(s) => {
                    r.line(format!("dg class group bound: {}", s.dg_upper_bound));
                    if let Some(g) = &s.cl_hi {
                        r.line(format!("Cl_hi: {g}"));
                    }
                    if let Some(exact) = s.exact {
                        r.line(format!("Cl_hi sequence exact: {exact}"));
                    }
                    r.invariant_factors = s.dg_upper_bound.invariant_factors().iter().map(|d| json!(d)).collect();
                    for c in s.caveats {
                        if !r.caveats.contains(&c) {
                            r.caveats.push(c);
                        }
                    }
                }
                Err(e) => r.caveats.push(format!("Cl_hi sequence not computed: {e}")),
            }
        }
    }
    Ok(r)
}

fn example(name: &str, params: &[String]) -> Outcome<String> {
    let mut map = Params::new();
    for p in params {
        let (k, v) = p
            .split_once('=')
            .ok_or_else(|| Failure::Usage(format!("parameter '{p}' is not key=value")))?;
        map.insert(k.to_string(), v.to_string());
    }
    let standard = match map.remove("order").as_deref() {
        None => false,
        Some("standard") => true,
        Some(other) => return Err(Failure::Usage(format!("unknown order '{other}'"))),
    };
    let mut file = AlgebraFile::from(build(name, &map)?);
    if standard {
        file.order = Some(ZLattice::standard(file.dg.dim()));
    }
    Ok(write(&file))
}

fn run(cli: Cli) -> Outcome<(String, bool)> {
    let (report, as_json) = match cli.command {
        Command::Example { name, params, output } => {
            let text = example(&name, &params)?;
            match output {
                Some(path) => fs::write(&path, text)
                    .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?,
                None => return Ok((text, true)),
            }
            return Ok((String::new(), true));
        }
        Command::Verify(i) => (verify(&load(&i.file)?)?, i.json),
        Command::Homology { input, ring } => (homology(&load(&input.file)?, ring)?, input.json),
        Command::Radicals(i) => (radicals(&load(&i.file)?)?, i.json),
        Command::Simples(i) => (simples(&load(&i.file)?)?, i.json),
        Command::Hull(i) => (hull(&load(&i.file)?)?, i.json),
        Command::Classgroup { input, mode } => (classgroup(&load(&input.file)?, mode)?, input.json),
    };
    Ok((report.render(as_json), report.failure.is_none()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((text, passed)) => {
            print!("{text}");
            ExitCode::from(if passed { 0 } else { 1 })
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Library(e)) => {
            eprintln!("error: {e}");
            match e {
                Error::TooLarge { .. } | Error::DimensionTooLarge { .. } => ExitCode::from(3),
                _ => ExitCode::from(1),
            }
        }
    }
}
