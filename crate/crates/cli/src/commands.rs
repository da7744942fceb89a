use std::path::Path;
use std::sync::Arc;

use serde_json::{json, Value};

use stringalg::bands::{bridge_quiver, enumerate_bands, is_domestic, Domesticity};
use stringalg::homs::hom_report;
use stringalg::module::{band_module, string_module};
use stringalg::presentation::validate_string_algebra;
use stringalg::ringel::{
    classify_formula, enumerate_ringel_list, morphism_oracle, pp_member, pp_oracle, string_dot, truncate,
    ziegler_basic_open, OracleVerdict,
};
use stringalg::suites::{run_all, SuiteConfig, SuiteStatus};
use stringalg::words::letters_text;
use stringalg::*;

use crate::args::{Cli, Command, Format, FormulaSpec, ModuleCommand, ModuleSpec, PointSpec, RingelCommand};
use crate::CliError;

const ALGEBRA_GRAMMAR: &str = "expected an algebra file:
  algebra <name>
  vertices: <v1> <v2> ...
  arrow <name>: <source> -> <target>
  relation: <arrowN> ... <arrow1>    (composition right to left)";

const WORD_GRAMMAR: &str = "expected a word:
  finite      a b^-1 g        (empty words: 1+ or 1- with --anchor)
  one-sided   b | (a b^-1)^inf
  two-sided   inf^(E) u' . v' (F)^inf";

pub struct Output {
    pub text: String,
    /// The command ran but reports a failure (exit 1).
    pub failed: bool,
}

/// Runs the body with `F` bound to the chosen field type.
macro_rules! with_field {
    ($choice:expr, $F:ident => $body:expr) => {
        match $choice {
            FieldChoice::Rationals => {
                type $F = Q;
                $body
            }
            FieldChoice::Prime(2) => {
                type $F = Fp<2>;
                $body
            }
            FieldChoice::Prime(3) => {
                type $F = Fp<3>;
                $body
            }
            FieldChoice::Prime(5) => {
                type $F = Fp<5>;
                $body
            }
            FieldChoice::Prime(7) => {
                type $F = Fp<7>;
                $body
            }
            FieldChoice::Prime(101) => {
                type $F = Fp<101>;
                $body
            }
            FieldChoice::Prime(32003) => {
                type $F = Fp<32003>;
                $body
            }
            FieldChoice::Prime(p) => Err(CliError::Usage(format!("GF({p}) is not compiled in"))),
        }
    };
}

struct Session<'a> {
    cli: &'a Cli,
    field: FieldChoice,
}

pub fn run(cli: &Cli) -> Result<Output, CliError> {
    let field: FieldChoice = cli.field.parse().map_err(|e: Error| match e {
        Error::Parse { message, .. } => CliError::Usage(format!("--field: {message}")),
        other => CliError::Usage(other.to_string()),
    })?;
    let s = Session { cli, field };
    match &cli.command {
        Command::Validate { file } => s.validate(file),
        Command::Bands { file } => s.bands(file),
        Command::Domestic { file } => s.domestic(file),
        Command::Bridge { file, dot } => s.bridge(file, *dot),
        Command::Module(m) => with_field!(s.field, F => s.module::<F>(m)),
        Command::Pp { file, module, formula } => with_field!(s.field, F => s.pp::<F>(file, module, formula)),
        Command::WordOf { file, module, point } => with_field!(s.field, F => s.word_of::<F>(file, module, point)),
        Command::Homog { file, module, point } => with_field!(s.field, F => s.homog::<F>(file, module, point)),
        Command::Hom { file, u, v } => with_field!(s.field, F => s.hom::<F>(file, u, v)),
        Command::Ringel(r) => with_field!(s.field, F => s.ringel::<F>(r)),
        Command::Audit { file, samples } => with_field!(s.field, F => s.audit::<F>(file, *samples)),
    }
}

fn read_presentation(path: &Path) -> Result<AlgebraPresentation, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    if text.trim().is_empty() {
        return Err(CliError::Usage(format!("{} is empty\n{ALGEBRA_GRAMMAR}", path.display())));
    }
    AlgebraPresentation::parse(&text).map_err(|e| match e {
        Error::Parse { .. } => CliError::Usage(format!("{}:{e}\n{ALGEBRA_GRAMMAR}", path.display())),
        other => CliError::Usage(format!("{}: {other}\n{ALGEBRA_GRAMMAR}", path.display())),
    })
}

fn load(path: &Path) -> Result<Arc<StringAlgebra>, CliError> {
    Ok(Arc::new(read_presentation(path)?.into_string_algebra()?))
}

fn word_error(e: Error) -> CliError {
    match e {
        Error::Parse { .. } => CliError::Usage(format!("{e}\n{WORD_GRAMMAR}")),
        other => other.into(),
    }
}

fn parse_value<F: Field>(s: &str) -> Result<F, CliError> {
    s.parse::<F>().map_err(|e| CliError::Usage(format!("`{s}`: {e}")))
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

fn coords_text<F: Field>(xs: &[F]) -> String {
    let parts: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(", "))
}

fn verdict_json(v: &OracleVerdict) -> Value {
    serde_json::to_value(v).expect("verdicts serialize")
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::InType => "InType",
        Verdict::NotInType => "NotInType",
    }
}

impl Session<'_> {
    fn format(&self) -> Format {
        self.cli.format
    }

    fn emit(&self, text: String, json: Value, dot: Option<String>) -> Result<Output, CliError> {
        let text = match self.format() {
            Format::Text => text,
            Format::Json => pretty(&json),
            Format::Dot => dot.ok_or_else(|| CliError::Usage("this command has no DOT output".into()))?,
        };
        Ok(Output { text, failed: false })
    }

    fn partition(&self, alg: &StringAlgebra) -> Result<HPartition, CliError> {
        let Some(spec) = &self.cli.partition else {
            return Ok(HPartition::lexicographic(alg));
        };
        let mut pairs = Vec::new();
        for item in spec.split(',').map(str::trim).filter(|x| !x.is_empty()) {
            let (letter, side) = item
                .rsplit_once(':')
                .ok_or_else(|| CliError::Usage(format!("partition entry `{item}`: expected <letter>:<+1|-1>")))?;
            let side: i8 = match side.trim() {
                "+1" | "1" | "+" => 1,
                "-1" | "-" => -1,
                other => return Err(CliError::Usage(format!("partition side `{other}`: expected +1 or -1"))),
            };
            pairs.push((letter.trim(), side));
        }
        HPartition::from_assignment(alg, &pairs).map_err(|e| CliError::Usage(e.to_string()))
    }

    fn anchor(&self, alg: &StringAlgebra) -> Result<Option<VertexId>, CliError> {
        self.cli
            .anchor
            .as_deref()
            .map(|v| alg.vertex_id(v).map_err(|e| CliError::Usage(e.to_string())))
            .transpose()
    }

    fn word(&self, alg: &StringAlgebra, text: &str) -> Result<Word, CliError> {
        Word::parse(alg, self.anchor(alg)?, text).map_err(word_error)
    }

    fn two_sided(&self, alg: &StringAlgebra, h: &HPartition, text: &str) -> Result<TwoSidedWord, CliError> {
        TwoSidedWord::parse(alg, h, self.anchor(alg)?, text).map_err(word_error)
    }

    fn max_len(&self, default: usize) -> usize {
        self.cli.max_len.map_or(default, |x| x as usize)
    }

    fn validate(&self, file: &Path) -> Result<Output, CliError> {
        let p = read_presentation(file)?;
        let v = validate_string_algebra(&p);
        let mut text = String::new();
        if v.valid {
            text += &format!("{}: valid string algebra\n", p.name);
            for (second, first) in &v.nonzero_pairs {
                text += &format!("  {second} {first} != 0\n");
            }
        } else {
            text += &format!("{}: not a string algebra\n", p.name);
            for x in &v.violations {
                text += &format!("  {x}\n");
            }
        }
        let json = json!({
            "algebra": p.name,
            "valid": v.valid,
            "violations": v.violations.iter().map(|x| json!({"kind": serde_json::to_value(x).unwrap()["kind"], "message": x.to_string()})).collect::<Vec<_>>(),
            "nonzero_pairs": v.nonzero_pairs.iter().map(|(s, f)| format!("{s} {f}")).collect::<Vec<_>>(),
        });
        let mut out = self.emit(text, json, None)?;
        out.failed = !v.valid;
        Ok(out)
    }

    fn bands(&self, file: &Path) -> Result<Output, CliError> {
        let alg = load(file)?;
        let dom = is_domestic(&alg);
        let default = match &dom {
            Domesticity::Domestic { longest_band, .. } => (*longest_band).max(1),
            Domesticity::NonDomestic { .. } => 8,
        };
        let max_len = self.max_len(default);
        let bs = enumerate_bands(&alg, max_len);
        let names: Vec<String> = bs.bands.iter().map(|b| b.to_text(&alg)).collect();
        let mut text = format!("{} bands of length <= {max_len}{}\n", names.len(), if bs.truncated { " (truncated)" } else { "" });
        for n in &names {
            text += &format!("  {n}\n");
        }
        let json = json!({
            "algebra": alg.name,
            "max_len": max_len,
            "truncated": bs.truncated,
            "domestic": dom.is_domestic(),
            "bands": names,
        });
        self.emit(text, json, None)
    }

    fn domestic(&self, file: &Path) -> Result<Output, CliError> {
        let alg = load(file)?;
        let dom = is_domestic(&alg);
        let text = format!("{}\n", dom.describe(&alg));
        let json = match &dom {
            Domesticity::Domestic { n, bands, .. } => json!({
                "domestic": true,
                "n": n,
                "bands": bands.iter().map(|b| b.to_text(&alg)).collect::<Vec<_>>(),
            }),
            Domesticity::NonDomestic { cycles, .. } => json!({
                "domestic": false,
                "cycles": cycles.iter().map(|c| letters_text(&alg, c)).collect::<Vec<_>>(),
            }),
        };
        self.emit(text, json, None)
    }

    fn bridge(&self, file: &Path, dot: bool) -> Result<Output, CliError> {
        let alg = load(file)?;
        let q = bridge_quiver(&alg, self.cli.max_len.map(|x| x as usize))?;
        let json = q.to_json(&alg);
        let dot_text = q.to_dot(&alg);
        if dot {
            return Ok(Output {
                text: dot_text,
                failed: false,
            });
        }
        let mut text = String::from("bands:\n");
        for b in &q.bands {
            text += &format!("  {}\n", b.to_text(&alg));
        }
        text += "covers:\n";
        for c in &q.covers {
            text += &format!(
                "  {} < {} via {}\n",
                q.bands[c.lower].to_text(&alg),
                q.bands[c.upper].to_text(&alg),
                letters_text(&alg, &c.witness)
            );
        }
        self.emit(text, json, Some(dot_text))
    }

    fn build<F: Field>(&self, alg: &Arc<StringAlgebra>, spec: &ModuleSpec) -> Result<FDModule<F>, CliError> {
        if let Some(w) = &spec.source.string {
            return Ok(string_module(alg, &self.word(alg, w)?));
        }
        if let Some(b) = &spec.source.band {
            let band = Band::parse(alg, b).map_err(word_error)?;
            return Ok(band_module(alg, &band, parse_value::<F>(&spec.lambda)?, spec.layers)?);
        }
        let path = spec.source.json.as_ref().expect("clap enforces one module source");
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        let value: Value = serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        Ok(FDModule::from_json(alg.clone(), &value)?)
    }

    fn point<F: Field>(&self, alg: &StringAlgebra, m: &FDModule<F>, p: &PointSpec) -> Result<PointedElement<F>, CliError> {
        if let Some(i) = p.node {
            if i >= m.dim() {
                return Err(CliError::Usage(format!("node {i} out of range; the module has {} basis vectors", m.dim())));
            }
            return Ok(m.basis_element(i));
        }
        let vertex = alg
            .vertex_id(p.vertex.as_deref().expect("clap requires --vertex"))
            .map_err(|e| CliError::Usage(e.to_string()))?;
        let coords = p
            .coords
            .as_deref()
            .expect("clap requires --coords")
            .split(',')
            .map(|x| parse_value::<F>(x.trim()))
            .collect::<Result<Vec<F>, _>>()?;
        Ok(m.element(vertex, coords)?)
    }

    fn module<F: Field>(&self, cmd: &ModuleCommand) -> Result<Output, CliError> {
        let (alg, m, word) = match cmd {
            ModuleCommand::String { file, word } => {
                let alg = load(file)?;
                let w = self.word(&alg, word)?;
                let m: FDModule<F> = string_module(&alg, &w);
                (alg, m, Some(w))
            }
            ModuleCommand::Band {
                file,
                band,
                lambda,
                layers,
            } => {
                let alg = load(file)?;
                let b = Band::parse(&alg, band).map_err(word_error)?;
                let m: FDModule<F> = band_module(&alg, &b, parse_value::<F>(lambda)?, *layers)?;
                (alg, m, None)
            }
        };
        let mut text = format!("field {}\ndims:", F::name());
        for (v, d) in alg.vertices.iter().zip(m.dims()) {
            text += &format!(" {v}={d}");
        }
        text += "\nbasis:";
        for n in m.nodes() {
            text += &format!(" {}@{}", n.label, alg.vertex_name(n.vertex));
        }
        text += "\n";
        for (a, mat) in alg.arrows.iter().zip(m.maps()) {
            text += &format!("{} ({} -> {}):\n", a.name, alg.vertex_name(a.source), alg.vertex_name(a.target));
            for r in mat.to_rows() {
                text += &format!("  {}\n", r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "));
            }
        }
        let dot = word.map(|w| string_dot(&alg, &w, None));
        self.emit(text, m.to_json(), dot)
    }

    fn formula(&self, alg: &StringAlgebra, f: &FormulaSpec) -> Result<PPWordFormula, CliError> {
        let parse = |s: &Option<String>| s.as_deref().map(|t| self.word(alg, t)).transpose();
        Ok(match (parse(&f.left)?, parse(&f.right)?) {
            (Some(c), Some(d)) => PPWordFormula::Both(c, d),
            (Some(c), None) => PPWordFormula::LeftDiv(c),
            (None, Some(d)) => PPWordFormula::RightDiv(d),
            (None, None) => unreachable!("clap requires --left or --right"),
        })
    }

    fn formula_text(alg: &StringAlgebra, f: &PPWordFormula) -> String {
        match f {
            PPWordFormula::RightDiv(d) => format!("(. {})", d.to_text(alg)),
            PPWordFormula::LeftDiv(c) => format!("(({})^-1 .)", c.to_text(alg)),
            PPWordFormula::Both(c, d) => format!("(({})^-1 . {})", c.to_text(alg), d.to_text(alg)),
        }
    }

    fn pp<F: Field>(&self, file: &Path, spec: &ModuleSpec, f: &FormulaSpec) -> Result<Output, CliError> {
        let alg = load(file)?;
        let h = self.partition(&alg)?;
        let m: FDModule<F> = self.build(&alg, spec)?;
        let formula = self.formula(&alg, f)?;
        let sol = m.pp_formula(&h, &formula)?;
        let desc = Self::formula_text(&alg, &formula);
        let mut text = format!("{desc}: dimension {} of {}\n", sol.dim(), sol.ambient());
        for b in sol.basis() {
            text += &format!("  {}\n", coords_text(b));
        }
        let json = json!({
            "formula": desc,
            "dim": sol.dim(),
            "ambient": sol.ambient(),
            "basis": sol.basis().iter().map(|b| b.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
        });
        self.emit(text, json, None)
    }

    fn word_of<F: Field>(&self, file: &Path, spec: &ModuleSpec, p: &PointSpec) -> Result<Output, CliError> {
        let alg = load(file)?;
        let h = self.partition(&alg)?;
        let m: FDModule<F> = self.build(&alg, spec)?;
        let x = self.point(&alg, &m, p)?;
        let w = m.word_of(&h, &x)?;
        let (u, v) = (w.left().to_text(&alg), w.right().to_text(&alg));
        let text = format!("u = {u}\nv = {v}\nw = {}\n", w.to_text(&alg));
        let json = json!({"u": u, "v": v, "word": w.to_text(&alg), "vertex": alg.vertex_name(x.vertex)});
        self.emit(text, json, None)
    }

    fn homog<F: Field>(&self, file: &Path, spec: &ModuleSpec, p: &PointSpec) -> Result<Output, CliError> {
        let alg = load(file)?;
        let h = self.partition(&alg)?;
        let m: FDModule<F> = self.build(&alg, spec)?;
        let x = self.point(&alg, &m, p)?;
        let (text, json) = match m.is_homogeneous(&h, &x)? {
            Homogeneity::Homogeneous => ("Homogeneous\n".to_string(), json!({"homogeneous": true})),
            Homogeneity::Decomposition(y) => {
                let rest = x.sub(&y)?;
                let uy = m.left_word(&h, &y)?.to_text(&alg);
                let ux = m.left_word(&h, &x)?.to_text(&alg);
                let vr = m.right_word(&h, &rest)?.to_text(&alg);
                let vx = m.right_word(&h, &x)?.to_text(&alg);
                let text = format!(
                    "Decomposition\n  x = {}\n  u(x) = {uy} > u(m) = {ux}\n  v(m - x) = {vr} > v(m) = {vx}\n",
                    coords_text(&y.coords)
                );
                let json = json!({
                    "homogeneous": false,
                    "witness": y.coords.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                    "u_witness": uy, "u": ux, "v_rest": vr, "v": vx,
                });
                (text, json)
            }
        };
        self.emit(text, json, None)
    }

    fn hom<F: Field>(&self, file: &Path, u: &str, v: &str) -> Result<Output, CliError> {
        let alg = load(file)?;
        let (wu, wv) = (self.word(&alg, u)?, self.word(&alg, v)?);
        let r = hom_report::<F>(&alg, &wu, &wv)?;
        let mut text = format!("Hom(M({}), M({})):\n", r.u, r.v);
        for t in &r.triples {
            text += &format!("  {t}\n");
        }
        text += &format!("count {} (oracle {})\n", r.count, r.oracle_count);
        let json = json!({"u": r.u, "v": r.v, "triples": r.triples, "count": r.count, "oracle_count": r.oracle_count});
        let mut out = self.emit(text, json, None)?;
        out.failed = !r.consistent();
        Ok(out)
    }

    fn ringel<F: Field>(&self, cmd: &RingelCommand) -> Result<Output, CliError> {
        match cmd {
            RingelCommand::List { file } => {
                let alg = load(file)?;
                let h = self.partition(&alg)?;
                let (p, mid) = self.cli.bounds.unwrap_or((2, 2));
                let list = enumerate_ringel_list::<F>(&alg, &h, p, mid)?;
                let mut text = String::new();
                for d in &list {
                    text += &format!("{}\n", d.to_text(&alg));
                }
                let json = json!({
                    "prefix_bound": p,
                    "middle_bound": mid,
                    "field": F::name(),
                    "descriptors": list.iter().map(|d| d.to_json(&alg)).collect::<Vec<_>>(),
                });
                self.emit(text, json, None)
            }
            RingelCommand::Truncate { file, word, n } => {
                let alg = load(file)?;
                let h = self.partition(&alg)?;
                let w = self.two_sided(&alg, &h, word)?;
                let (t, k) = truncate(&alg, &h, &w, *n);
                let text = format!("{}\nanchor x{k}\n", t.to_text(&alg));
                let json = json!({"word": t.to_text(&alg), "anchor": k, "n": n, "length": t.len()});
                self.emit(text, json, Some(string_dot(&alg, &t, Some(k))))
            }
            RingelCommand::Pp { file, word, formula } => {
                let alg = load(file)?;
                let h = self.partition(&alg)?;
                let w = self.two_sided(&alg, &h, word)?;
                let (c, d) = match self.formula(&alg, formula)? {
                    PPWordFormula::Both(c, d) => (c, d),
                    _ => return Err(CliError::Usage("ringel pp needs both --left and --right".into())),
                };
                let verdict = pp_member(&alg, &h, &w, &c, &d)?;
                let oracle = pp_oracle::<F>(&alg, &h, &w, &[PPWordFormula::Both(c, d)])?;
                let text = format!(
                    "{}\noracle {} (stable: {})\n",
                    verdict_name(verdict),
                    verdict_name(oracle.verdict),
                    oracle.stable
                );
                let json = json!({"verdict": verdict, "oracle": verdict_json(&oracle)});
                self.emit(text, json, None)
            }
            RingelCommand::Classify { file, word, module, point } => {
                let alg = load(file)?;
                let h = self.partition(&alg)?;
                let w = self.two_sided(&alg, &h, word)?;
                let m: FDModule<F> = self.build(&alg, module)?;
                let l = self.point(&alg, &m, point)?;
                let z = ziegler_basic_open(&alg, &h, &w)?;
                let c = classify_formula(&alg, &h, &w, &m, &l)?;
                let oracle = morphism_oracle(&alg, &h, &w, &m, &l, &z.psi())?;
                let text = format!(
                    "{}: {}\noracle {} (stable: {})\n",
                    verdict_name(c.verdict),
                    c.reason,
                    verdict_name(oracle.verdict),
                    oracle.stable
                );
                let json = json!({
                    "verdict": c.verdict,
                    "reason": c.reason,
                    "open_set": z.to_json(&alg),
                    "oracle": verdict_json(&oracle),
                });
                let mut out = self.emit(text, json, None)?;
                out.failed = c.verdict != oracle.verdict;
                Ok(out)
            }
        }
    }

    fn audit<F: Field>(&self, file: &Path, samples: usize) -> Result<Output, CliError> {
        let alg = load(file)?;
        let h = self.partition(&alg)?;
        let max_len = self.max_len(6);
        let cfg = SuiteConfig {
            max_len,
            hom_len: max_len.min(4),
            samples,
            seed: self.cli.seed,
        };
        let reports = run_all::<F>(&alg, &h, &cfg);
        let failed = reports.iter().any(|r| !r.passed());
        let mut text = format!("audit {} over {} (max_len {max_len}, samples {samples}, seed {})\n", alg.name, F::name(), cfg.seed);
        for r in &reports {
            let status = match &r.status {
                SuiteStatus::Passed => "passed".to_string(),
                SuiteStatus::Failed => "FAILED".to_string(),
                SuiteStatus::Skipped { reason } => format!("skipped ({reason})"),
            };
            text += &format!("  {:<20} {status:<24} {} cases\n", r.name, r.cases);
            for f in &r.failures {
                text += &format!("    {f}\n");
            }
        }
        text += if failed { "some suites failed\n" } else { "all suites passed\n" };
        let json = json!({
            "algebra": alg.name,
            "field": F::name(),
            "config": serde_json::to_value(&cfg).expect("config serializes"),
            "suites": serde_json::to_value(&reports).expect("reports serialize"),
            "passed": !failed,
        });
        let mut out = self.emit(text, json, None)?;
        out.failed = failed;
        Ok(out)
    }
}
