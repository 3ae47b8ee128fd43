use std::error::Error;
use std::fmt::Write as _;
use std::fs;

use serde::Deserialize;
use serde_json::{json, Value};

use skelcollar_core::birmaps::{bir_step, product_to_projective, verify_birational, Verdict};
use skelcollar_core::bundles::{
    collar_line_iso, line_bundle_normal_form, moduli_dimension, picard_group, splitting_type, BundleTransition,
    IsoVerdict, ModuliDimension,
};
use skelcollar_core::deform::{
    default_cutoff, deformation_family, ext1_basis, family_splitting_profile, generic_class,
};
use skelcollar_core::duality::{duality_report, SquareOptions};
use skelcollar_core::exact::parse_rational;
use skelcollar_core::potential::{
    action_vector_field, hamiltonian_residual, solve_potential, SymplecticStructure, VectorField,
};
use skelcollar_core::skeleton::{closed_form, skeleton_with, TorusAction};
use skelcollar_core::toric::{
    cone_of_x, cone_of_x_dual, dynkin_dual_graph, fan_svg, minimal_resolution, resolve_cone, Cone2D,
    QuotientSingularity, ResolutionChain,
};
use skelcollar_core::{PolyMatrix, Rational};

use crate::{CollarCommand, Command, Common, Format};

type CmdResult = Result<Report, Box<dyn Error>>;

pub struct Report {
    pub command: &'static str,
    pub seed: u64,
    pub cutoff: String,
    pub text: String,
    pub json: Value,
    pub svg: Option<String>,
    pub verified: bool,
}

impl Report {
    fn new(command: &'static str, common: &Common) -> Self {
        Report {
            command,
            seed: common.seed,
            cutoff: common.cutoff.map_or_else(|| "max(3,2j)".to_string(), |c| c.to_string()),
            text: String::new(),
            json: Value::Null,
            svg: None,
            verified: true,
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => format!(
                "# skelcollar {} seed={} cutoff={}\n{}\n",
                self.command,
                self.seed,
                self.cutoff,
                self.text.trim_end()
            ),
            Format::Json => {
                let mut obj = serde_json::Map::new();
                obj.insert("command".into(), json!(self.command));
                obj.insert("seed".into(), json!(self.seed));
                obj.insert("cutoff".into(), json!(self.cutoff));
                obj.insert("verified".into(), json!(self.verified));
                match &self.json {
                    Value::Object(m) => obj.extend(m.clone()),
                    other => {
                        obj.insert("result".into(), other.clone());
                    }
                }
                let mut s = serde_json::to_string_pretty(&Value::Object(obj)).expect("json value");
                s.push('\n');
                s
            }
            Format::Svg => self.svg.clone().unwrap_or_default(),
        }
    }
}

pub fn dispatch(cmd: &Command, common: &Common) -> CmdResult {
    let draws = matches!(cmd, Command::Resolve { .. } | Command::Fan { .. });
    if common.format == Format::Svg && !draws {
        return Err("--format svg is only available for resolve and fan".into());
    }
    match cmd {
        Command::Skeleton { n, weights } => skeleton_cmd(*n, weights.as_deref(), common),
        Command::Potential { n, weights, kappa } => potential_cmd(*n, weights.as_deref(), kappa, common),
        Command::Resolve { n, a } => resolve_cmd(*n, *a, common),
        Command::Fan { n, dual, resolved } => fan_cmd(*n, *dual, *resolved, common),
        Command::Birmap { a, b, samples } => birmap_cmd(*a, *b, *samples, common),
        Command::Birstep { n, j, samples } => birstep_cmd(*n, *j, *samples, common),
        Command::Collar { what: CollarCommand::Pic { n } } => pic_cmd(*n, common),
        Command::Collar { what: CollarCommand::Iso { n, j1, j2, bound } } => iso_cmd(*n, *j1, *j2, *bound, common),
        Command::Splitting { matrix } => splitting_cmd(matrix, common),
        Command::ModuliDim { n, j } => moduli_cmd(*n, *j, common),
        Command::Ext1 { n, j } => ext1_cmd(*n, *j, common),
        Command::Deform { n, j, s, taus } => deform_cmd(*n, *j, *s, taus, common),
        Command::Duality { n, samples, def_s } => duality_cmd(*n, *samples, *def_s, common),
    }
}

fn action_for(n: usize, weights: Option<&[i64]>) -> Result<TorusAction, Box<dyn Error>> {
    match weights {
        None => Ok(TorusAction::standard(n)),
        Some(w) if w.len() != n => Err(format!("{} weights given for n = {n}", w.len()).into()),
        Some(w) => Ok(TorusAction::new(w.to_vec())?),
    }
}

fn skeleton_cmd(n: usize, weights: Option<&[i64]>, common: &Common) -> CmdResult {
    let action = action_for(n, weights)?;
    let comps = skeleton_with(n, &action)?;
    let mut r = Report::new("skeleton", common);
    let mut rows = Vec::new();
    for c in &comps {
        writeln!(r.text, "{c}")?;
        r.verified &= c.classification == closed_form(n, c.index);
        rows.push(json!({
            "index": c.index,
            "label": c.classification.to_string(),
            "classification": c.classification,
            "forced_zeros": c.forced_zeros,
            "equations": c.equation_string(),
            "chart_equations": c.chart_equations,
            "free_base": c.free_base,
            "free_fiber": c.free_fiber,
        }));
    }
    r.json = json!({ "n": n, "weights": action.weights(), "components": rows });
    Ok(r)
}

fn potential_cmd(n: usize, weights: Option<&[i64]>, kappa: &str, common: &Common) -> CmdResult {
    let w: Vec<i64> = match weights {
        Some(w) if w.len() != n => return Err(format!("{} weights given for n = {n}", w.len()).into()),
        Some(w) => w.to_vec(),
        None => (1..=n as i64).collect(),
    };
    let kappa = parse_rational(kappa)?;
    let field = action_vector_field(&w);
    let omega = SymplecticStructure::new(n);
    let p = solve_potential(&field, &omega, &kappa)?;
    let residual = hamiltonian_residual(&p, &field, &omega, &VectorField::symbolic(n));
    let crit = p.critical_points()?;
    let mut r = Report::new("potential", common);
    writeln!(r.text, "X = {field}")?;
    writeln!(r.text, "{p}")?;
    writeln!(r.text, "residual dh - kappa*omega(X, .) = {residual}")?;
    writeln!(r.text, "critical locus dimension = {}", crit.len())?;
    r.verified = residual.is_zero();
    r.json = json!({
        "n": n,
        "weights": w,
        "kappa": kappa.to_string(),
        "h": p.h.to_string(),
        "h_poly": p.h,
        "residual": residual.to_string(),
        "critical_dim": crit.len(),
    });
    Ok(r)
}

fn chain_json(chain: &ResolutionChain) -> Value {
    let (r1, r2) = chain.cone.rays();
    json!({
        "cone": [r1, r2],
        "rays": chain.rays,
        "self_intersections": chain.self_intersections,
        "intersection_matrix": chain.intersection_matrix,
        "dynkin": dynkin_dual_graph(chain).dynkin_label(),
    })
}

fn write_chain(out: &mut String, chain: &ResolutionChain) -> std::fmt::Result {
    let (r1, r2) = chain.cone.rays();
    writeln!(out, "cone: <{r1:?}, {r2:?}>  multiplicity {}", chain.cone.multiplicity())?;
    writeln!(out, "exceptional rays: {:?}", chain.rays)?;
    writeln!(out, "self-intersections: {:?}", chain.self_intersections)?;
    writeln!(out, "intersection matrix:")?;
    for row in &chain.intersection_matrix {
        writeln!(out, "  {row:?}")?;
    }
    if let Some(label) = dynkin_dual_graph(chain).dynkin_label() {
        writeln!(out, "dual graph: {label}")?;
    }
    Ok(())
}

fn resolve_cmd(n: u32, a: u32, common: &Common) -> CmdResult {
    let s = QuotientSingularity::new(n, a)?;
    let chain = minimal_resolution(&s);
    let mut r = Report::new("resolve", common);
    writeln!(r.text, "1/{n}({},{})", s.generator().0, s.generator().1)?;
    write_chain(&mut r.text, &chain)?;
    r.json = chain_json(&chain);
    r.svg = Some(fan_svg(&chain.cone, Some(&chain), &format!("1/{n}(1,{a})")));
    Ok(r)
}

fn fan_cmd(n: u32, dual: bool, resolved: bool, common: &Common) -> CmdResult {
    let (cone, name): (Cone2D, String) =
        if dual { (cone_of_x_dual(n), format!("X_{n} dual")) } else { (cone_of_x(n), format!("X_{n}")) };
    let chain = resolved.then(|| resolve_cone(&cone));
    let mut r = Report::new("fan", common);
    let (r1, r2) = cone.rays();
    writeln!(r.text, "{name}: <{r1:?}, {r2:?}>")?;
    if let Some(c) = &chain {
        write_chain(&mut r.text, c)?;
    }
    r.json = match &chain {
        Some(c) => chain_json(c),
        None => json!({ "cone": [r1, r2] }),
    };
    r.svg = Some(fan_svg(&cone, chain.as_ref(), &name));
    Ok(r)
}

fn verdict_line(out: &mut String, label: &str, v: &Verdict) -> std::fmt::Result {
    writeln!(
        out,
        "{label}: {} checked, {} skipped, {} failed -> {}",
        v.checked,
        v.skipped,
        v.failed,
        if v.passed { "identity" } else { "FAILED" }
    )
}

fn birmap_cmd(a: usize, b: usize, samples: usize, common: &Common) -> CmdResult {
    let p = product_to_projective(a, b)?;
    let there = verify_birational(&p.forward, &p.inverse, samples, common.seed)?;
    let back = verify_birational(&p.inverse, &p.forward, samples, common.seed)?;
    let mut r = Report::new("birmap", common);
    writeln!(r.text, "keep: {:?}", p.keep)?;
    writeln!(r.text, "forward: {}", p.forward)?;
    writeln!(r.text, "inverse: {}", p.inverse)?;
    verdict_line(&mut r.text, "inverse . forward", &there)?;
    verdict_line(&mut r.text, "forward . inverse", &back)?;
    r.verified = there.passed && back.passed;
    r.json = json!({
        "a": a,
        "b": b,
        "keep": p.keep,
        "forward": p.forward.component_strings(),
        "inverse": p.inverse.component_strings(),
        "round_trip": [there, back],
    });
    Ok(r)
}

fn birstep_cmd(n: usize, j: usize, samples: usize, common: &Common) -> CmdResult {
    let st = bir_step(n, j)?;
    let there = verify_birational(&st.forward, &st.inverse, samples, common.seed)?;
    let back = verify_birational(&st.inverse, &st.forward, samples, common.seed)?;
    let mut r = Report::new("birstep", common);
    writeln!(r.text, "source keep {:?}, target keep {:?}, twist {}", st.source_keep, st.target_keep, st.twist_normalization)?;
    writeln!(r.text, "forward: {}", st.forward)?;
    writeln!(r.text, "inverse: {}", st.inverse)?;
    verdict_line(&mut r.text, "inverse . forward", &there)?;
    verdict_line(&mut r.text, "forward . inverse", &back)?;
    r.verified = there.passed && back.passed;
    r.json = json!({
        "n": n,
        "j": j,
        "source_keep": st.source_keep,
        "target_keep": st.target_keep,
        "twist_normalization": st.twist_normalization,
        "forward": st.forward.component_strings(),
        "inverse": st.inverse.component_strings(),
        "round_trip": [there, back],
    });
    Ok(r)
}

fn pic_cmd(n: u32, common: &Common) -> CmdResult {
    let pic = picard_group(n)?;
    let mut r = Report::new("collar pic", common);
    writeln!(r.text, "Pic of the collar of Z_{n}: tensor table of L_{n}(0..{n})")?;
    for row in &pic.table {
        writeln!(r.text, "  {row:?}")?;
    }
    let mut forms = Vec::new();
    for j in 0..n as i64 {
        let nf = line_bundle_normal_form(n, j)?;
        writeln!(r.text, "{nf}")?;
        forms.push(nf.to_string());
    }
    let cyclic = pic.is_cyclic_of_order_n();
    writeln!(r.text, "certificates verified: {}, cyclic of order {n}: {cyclic}", pic.certificates_verified)?;
    r.verified = pic.certificates_verified && cyclic;
    r.json = json!({ "n": n, "table": pic.table, "normal_forms": forms, "cyclic": cyclic });
    Ok(r)
}

fn iso_cmd(n: u32, j1: i64, j2: i64, bound: Option<i64>, common: &Common) -> CmdResult {
    let v = collar_line_iso(n, j1, j2, bound)?;
    let mut r = Report::new("collar iso", common);
    match &v {
        IsoVerdict::Isomorphic(c) => {
            writeln!(r.text, "L_{n}({j1}) ~ L_{n}({j2}) on the collar (bound {})", c.bound)?;
            writeln!(r.text, "A = {}", c.a)?;
            writeln!(r.text, "B = {}", c.b)?;
        }
        IsoVerdict::NonIsomorphic { residue1, residue2 } => {
            writeln!(r.text, "L_{n}({j1}) and L_{n}({j2}) are not isomorphic: residues {residue1} != {residue2}")?;
        }
        IsoVerdict::Inconclusive { bound } => {
            writeln!(r.text, "no certificate within bound {bound} although the residues agree")?;
            r.verified = false;
        }
    }
    r.json = json!({ "n": n, "j1": j1, "j2": j2, "verdict": v });
    Ok(r)
}

#[derive(Deserialize)]
struct MatrixFile {
    n: u32,
    matrix: PolyMatrix,
}

fn splitting_cmd(path: &std::path::Path, common: &Common) -> CmdResult {
    let raw = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let file: MatrixFile = serde_json::from_str(&raw)?;
    let bt = BundleTransition::new(file.n, file.matrix)?;
    let c1 = bt.first_chern_class()?;
    let j = splitting_type(&bt)?;
    let mut r = Report::new("splitting", common);
    writeln!(r.text, "transition: {}", bt.matrix)?;
    writeln!(r.text, "c1 = {c1}")?;
    writeln!(r.text, "splitting type {j}: O({j}) + O({})", -j)?;
    r.json = json!({ "n": file.n, "c1": c1, "splitting_type": j });
    Ok(r)
}

fn moduli_cmd(n: u32, j: i64, common: &Common) -> CmdResult {
    let d = moduli_dimension(n, j)?;
    let mut r = Report::new("moduli-dim", common);
    match &d {
        ModuliDimension::Dim(k) => writeln!(r.text, "dim M_{j}(Z_{n}) = 2j - n - 2 = {k}")?,
        ModuliDimension::Empty { note, .. } => writeln!(r.text, "empty: {note}")?,
    }
    r.json = json!({ "n": n, "j": j, "dimension": d });
    Ok(r)
}

fn with_cutoff(mut r: Report, j: i64, common: &Common) -> Report {
    r.cutoff = common.cutoff.unwrap_or_else(|| default_cutoff(j)).to_string();
    r
}

fn ext1_cmd(n: u32, j: i64, common: &Common) -> CmdResult {
    let basis = ext1_basis(n, j, common.cutoff)?;
    let mut r = with_cutoff(Report::new("ext1", common), j, common);
    writeln!(r.text, "Ext^1(O({j}), O({})) on Z_{n}: dimension {}", -j, basis.dim())?;
    for p in basis.polys() {
        writeln!(r.text, "  {p}")?;
    }
    r.json = json!({ "n": n, "j": j, "dim": basis.dim(), "monomials": basis.monomials });
    Ok(r)
}

fn deform_cmd(n: u32, j: i64, s: i64, taus: &[String], common: &Common) -> CmdResult {
    let taus: Vec<Rational> = taus.iter().map(|t| parse_rational(t)).collect::<Result<_, _>>()?;
    let class = generic_class(n, j, s)?;
    let fam = deformation_family(&class, s)?;
    let profile = family_splitting_profile(&fam, &taus)?;
    let mut r = with_cutoff(Report::new("deform", common), j + s, common);
    writeln!(r.text, "class p = {} in Ext^1 window {}", class.p, class.j)?;
    writeln!(r.text, "family: {}", fam.matrix)?;
    let zero = Rational::from_integer(0.into());
    for (t, k) in taus.iter().zip(&profile) {
        let want = if *t == zero { j + s } else { j };
        r.verified &= *k == want;
        writeln!(r.text, "tau = {t}: splitting {k}")?;
    }
    r.json = json!({
        "n": n,
        "j": j,
        "s": s,
        "class": class.p.to_string(),
        "taus": taus.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "profile": profile,
    });
    Ok(r)
}

fn duality_cmd(n: u32, samples: usize, def_s: i64, common: &Common) -> CmdResult {
    let opts = SquareOptions { samples, seed: common.seed, def_s };
    let rep = duality_report(n, &opts)?;
    let mut r = Report::new("duality", common);
    r.text = rep.to_string();
    r.verified = rep.all_verified;
    r.json = serde_json::to_value(&rep)?;
    Ok(r)
}
