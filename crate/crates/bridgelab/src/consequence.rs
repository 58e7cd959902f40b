//! Consequence relations decided by exhaustive model enumeration.
//!
//! A sequent Γ ⊨xy A is valid when every admissible model that x-designates
//! all of Γ also y-designates A. Admissible models range over all ground-atom
//! assignments (classical for CL, three-valued otherwise), optionally
//! filtered by the transparency constraint.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::Deserialize;
use thiserror::Error;

use crate::semantics::{
    check_transparency, eval, ConnectiveFamily, DesignationStandard, Model, SemanticsError,
    TruthValue,
};
use crate::syntax::{
    instantiate, parse_name_map, parse_with_defs, Definitions, Formula, QuotationContext,
    SyntaxError, Term,
};

pub const DEFAULT_CAP: usize = 16;

/// The five consequence relations, named by their premise/conclusion
/// designation standards.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Relation {
    /// Classical consequence: classical valuations only.
    Cl,
    /// Strict-strict (K3).
    Ss,
    /// Tolerant-tolerant (LP).
    Tt,
    /// Strict-tolerant.
    St,
    /// Tolerant-strict.
    Ts,
}

impl Relation {
    pub const ALL: [Relation; 5] = [
        Relation::Cl,
        Relation::Ss,
        Relation::Tt,
        Relation::St,
        Relation::Ts,
    ];

    /// Restrict enumeration to classical valuations?
    pub fn classical_only(self) -> bool {
        self == Relation::Cl
    }

    pub fn premise_standard(self) -> DesignationStandard {
        match self {
            Relation::Cl => DesignationStandard::ClassicalTrue,
            Relation::Ss | Relation::St => DesignationStandard::Strict,
            Relation::Tt | Relation::Ts => DesignationStandard::Tolerant,
        }
    }

    pub fn conclusion_standard(self) -> DesignationStandard {
        match self {
            Relation::Cl => DesignationStandard::ClassicalTrue,
            Relation::Ss | Relation::Ts => DesignationStandard::Strict,
            Relation::Tt | Relation::St => DesignationStandard::Tolerant,
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Relation::Cl => "cl",
            Relation::Ss => "ss",
            Relation::Tt => "tt",
            Relation::St => "st",
            Relation::Ts => "ts",
        };
        write!(f, "{s}")
    }
}

impl FromStr for Relation {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "cl" => Ok(Relation::Cl),
            "ss" => Ok(Relation::Ss),
            "tt" => Ok(Relation::Tt),
            "st" => Ok(Relation::St),
            "ts" => Ok(Relation::Ts),
            other => Err(format!(
                "unknown relation `{other}` (expected cl, ss, tt, st, or ts)"
            )),
        }
    }
}

impl FromStr for ConnectiveFamily {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "strong-kleene" | "sk" => Ok(ConnectiveFamily::StrongKleene),
            "cooper" => Ok(ConnectiveFamily::Cooper),
            other => Err(format!(
                "unknown family `{other}` (expected strong-kleene or cooper)"
            )),
        }
    }
}

/// Γ ⊨ A together with everything needed to enumerate its models.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Sequent {
    pub premises: Vec<Formula>,
    pub conclusion: Formula,
    pub domain: Vec<String>,
    pub ctx: QuotationContext,
    pub transparent: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub valid: bool,
    pub countermodel: Option<Model>,
    pub models_checked: usize,
}

impl Verdict {
    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::json!({
            "valid": self.valid,
            "countermodel": self.countermodel.as_ref().map(|m| m.to_json_value()),
            "modelsChecked": self.models_checked,
        })
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConsequenceError {
    #[error("enumeration over {atoms} atoms exceeds the cap of {cap} (raise --cap or BRIDGELAB_CAP)")]
    CapExceeded { atoms: usize, cap: usize },
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
}

/// Ground-atom keys of a formula over a domain: quantifiers are expanded
/// over the domain, `True(n)` becomes its own key, and `Fut A` for ground
/// atomic A becomes the key `Fut A`.
fn collect_atoms(
    f: &Formula,
    domain: &[String],
    acc: &mut BTreeSet<String>,
) -> Result<(), ConsequenceError> {
    match f {
        Formula::Falsum => Ok(()),
        Formula::Atom(..) => {
            acc.insert(f.to_string());
            Ok(())
        }
        Formula::TruePred(Term::Const(n)) => {
            acc.insert(format!("True({n})"));
            Ok(())
        }
        Formula::TruePred(Term::Var(_)) => Ok(()),
        Formula::Fut(body) if matches!(body.as_ref(), Formula::Atom(..)) && body.is_closed() => {
            acc.insert(f.to_string());
            Ok(())
        }
        Formula::Fut(body) => collect_atoms(body, domain, acc),
        Formula::Not(a) | Formula::Simp(a) => collect_atoms(a, domain, acc),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Cond(a, b) | Formula::Bicond(a, b) => {
            collect_atoms(a, domain, acc)?;
            collect_atoms(b, domain, acc)
        }
        Formula::Forall(v, body) | Formula::Exists(v, body) => {
            for d in domain {
                let inst = instantiate(body, v, &Term::Const(d.clone()))?;
                collect_atoms(&inst, domain, acc)?;
            }
            Ok(())
        }
    }
}

impl Sequent {
    pub fn new(premises: Vec<Formula>, conclusion: Formula) -> Sequent {
        let mut s = Sequent {
            premises,
            conclusion,
            ..Default::default()
        };
        s.domain = s.default_domain();
        s
    }

    fn default_domain(&self) -> Vec<String> {
        let mut consts = BTreeSet::new();
        for f in self.premises.iter().chain([&self.conclusion]) {
            consts.extend(f.constants());
        }
        for (n, f) in self.ctx.iter() {
            consts.insert(n.clone());
            consts.extend(f.constants());
        }
        consts.into_iter().collect()
    }

    /// The sequent's signature: every ground atom mentioned by the premises,
    /// the conclusion, or (transitively) the referent of any bound name.
    pub fn ground_atoms(&self) -> Result<BTreeSet<String>, ConsequenceError> {
        let mut acc = BTreeSet::new();
        for f in self.premises.iter().chain([&self.conclusion]) {
            collect_atoms(f, &self.domain, &mut acc)?;
        }
        // Transparency relates True(n) to its referent, so once a name's
        // truth atom is in play the referent's atoms must be valued too.
        loop {
            let mut grew = false;
            for (n, referent) in self.ctx.iter() {
                if acc.contains(&format!("True({n})")) {
                    let before = acc.len();
                    collect_atoms(referent, &self.domain, &mut acc)?;
                    grew |= acc.len() > before;
                }
            }
            if !grew {
                break;
            }
        }
        Ok(acc)
    }

    /// Parse a sequent file. Returns the sequent plus any relation/family
    /// the file itself requests.
    pub fn from_json(
        text: &str,
    ) -> Result<(Sequent, Option<Relation>, Option<ConnectiveFamily>), ConsequenceError> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct SequentFile {
            premises: Vec<String>,
            conclusion: String,
            #[serde(default)]
            relation: Option<String>,
            #[serde(default)]
            family: Option<String>,
            #[serde(default)]
            transparent: bool,
            #[serde(default)]
            names: BTreeMap<String, String>,
            #[serde(default)]
            domain: Option<Vec<String>>,
        }
        let file: SequentFile = serde_json::from_str(text).map_err(|e| {
            ConsequenceError::Syntax(SyntaxError::Parse {
                pos: 0,
                msg: format!("sequent JSON: {e}"),
            })
        })?;
        let ctx = parse_name_map(&file.names)?;
        let defs = Definitions::new();
        let premises = file
            .premises
            .iter()
            .map(|p| parse_with_defs(p, &ctx, &defs))
            .collect::<Result<Vec<_>, _>>()?;
        let conclusion = parse_with_defs(&file.conclusion, &ctx, &defs)?;
        let mut s = Sequent {
            premises,
            conclusion,
            domain: Vec::new(),
            ctx,
            transparent: file.transparent,
        };
        s.domain = match file.domain {
            Some(mut d) => {
                d.sort();
                d.dedup();
                d
            }
            None => s.default_domain(),
        };
        let relation = file.relation.map(|r| r.parse()).transpose().map_err(
            |e: String| {
                ConsequenceError::Syntax(SyntaxError::Parse { pos: 0, msg: e })
            },
        )?;
        let family = file.family.map(|f| f.parse()).transpose().map_err(
            |e: String| {
                ConsequenceError::Syntax(SyntaxError::Parse { pos: 0, msg: e })
            },
        )?;
        Ok((s, relation, family))
    }
}

/// Deterministic stream of admissible models over a fixed atom set: the
/// sorted atom list is read as a big-endian odometer over the value order
/// 0, 1/2, 1 (0, 1 when classical), then filtered by transparency.
pub struct ModelStream {
    atoms: Vec<String>,
    values: &'static [TruthValue],
    /// Next assignment as digit indices; None once exhausted.
    digits: Option<Vec<usize>>,
    template: Model,
    family: ConnectiveFamily,
}

impl ModelStream {
    pub fn new(
        atoms: BTreeSet<String>,
        domain: Vec<String>,
        ctx: QuotationContext,
        transparent: bool,
        classical: bool,
        family: ConnectiveFamily,
        cap: usize,
    ) -> Result<ModelStream, ConsequenceError> {
        if atoms.len() > cap {
            return Err(ConsequenceError::CapExceeded {
                atoms: atoms.len(),
                cap,
            });
        }
        let atoms: Vec<String> = atoms.into_iter().collect();
        let digits = Some(vec![0; atoms.len()]);
        Ok(ModelStream {
            digits,
            values: if classical {
                &TruthValue::CLASSICAL
            } else {
                &TruthValue::ALL
            },
            template: Model {
                domain,
                atoms: BTreeMap::new(),
                names: ctx,
                transparent,
            },
            atoms,
            family,
        })
    }

    fn advance(&mut self) {
        let Some(digits) = self.digits.as_mut() else {
            return;
        };
        for i in (0..digits.len()).rev() {
            if digits[i] + 1 < self.values.len() {
                digits[i] += 1;
                return;
            }
            digits[i] = 0;
        }
        // Zero atoms still yields the single empty assignment once.
        self.digits = None;
    }
}

impl Iterator for ModelStream {
    type Item = Model;

    fn next(&mut self) -> Option<Model> {
        loop {
            let digits = self.digits.as_ref()?;
            let mut m = self.template.clone();
            for (a, &d) in self.atoms.iter().zip(digits) {
                m.atoms.insert(a.clone(), self.values[d]);
            }
            if self.atoms.is_empty() {
                self.digits = None;
            } else {
                self.advance();
            }
            if !m.transparent || check_transparency(&m, self.family).unwrap_or(false) {
                return Some(m);
            }
        }
    }
}

/// All admissible models of a sequent under the given relation's valuation
/// class.
pub fn admissible_models(
    s: &Sequent,
    classical: bool,
    family: ConnectiveFamily,
    cap: usize,
) -> Result<ModelStream, ConsequenceError> {
    ModelStream::new(
        s.ground_atoms()?,
        s.domain.clone(),
        s.ctx.clone(),
        s.transparent,
        classical,
        family,
        cap,
    )
}

/// Decide a sequent by brute force, returning the first countermodel in
/// enumeration order if there is one.
pub fn valid(
    s: &Sequent,
    r: Relation,
    family: ConnectiveFamily,
    cap: usize,
) -> Result<Verdict, ConsequenceError> {
    let prem_std = r.premise_standard();
    let concl_std = r.conclusion_standard();
    let mut checked = 0;
    for m in admissible_models(s, r.classical_only(), family, cap)? {
        checked += 1;
        let mut all_designated = true;
        for p in &s.premises {
            if !prem_std.designates(eval(p, &m, family)?) {
                all_designated = false;
                break;
            }
        }
        if !all_designated {
            continue;
        }
        if !concl_std.designates(eval(&s.conclusion, &m, family)?) {
            return Ok(Verdict {
                valid: false,
                countermodel: Some(m),
                models_checked: checked,
            });
        }
    }
    Ok(Verdict {
        valid: true,
        countermodel: None,
        models_checked: checked,
    })
}

pub mod agreement {
    //! Exhaustive comparison of the five relations over a generated
    //! propositional formula pool (transparency-free fragment).

    use super::*;
    use crate::semantics::{Half, One, Zero};

    /// A pool formula together with its value at each of the nine
    /// three-valued valuations of the atoms A, B (A is the more significant
    /// digit; value order 0, 1/2, 1).
    #[derive(Clone)]
    pub struct PoolEntry {
        pub formula: Formula,
        pub vector: [TruthValue; 9],
    }

    /// Valuation indices at which both atoms are classical.
    const CLASSICAL_IDX: [usize; 4] = [0, 2, 6, 8];

    fn atom_vectors() -> Vec<PoolEntry> {
        let order = [Zero, Half, One];
        let a = std::array::from_fn(|i| order[i / 3]);
        let b = std::array::from_fn(|i| order[i % 3]);
        vec![
            PoolEntry {
                formula: Formula::Falsum,
                vector: [Zero; 9],
            },
            PoolEntry {
                formula: Formula::Atom("A".into(), vec![]),
                vector: a,
            },
            PoolEntry {
                formula: Formula::Atom("B".into(), vec![]),
                vector: b,
            },
        ]
    }

    fn apply1(op: fn(TruthValue) -> TruthValue, v: &[TruthValue; 9]) -> [TruthValue; 9] {
        std::array::from_fn(|i| op(v[i]))
    }

    fn apply2(
        op: impl Fn(TruthValue, TruthValue) -> TruthValue,
        a: &[TruthValue; 9],
        b: &[TruthValue; 9],
    ) -> [TruthValue; 9] {
        std::array::from_fn(|i| op(a[i], b[i]))
    }

    /// All strong Kleene formulas of operator depth ≤ `max_depth` over A, B,
    /// deduplicated by semantic vector (two formulas with the same nine
    /// values behave identically in every sequent role, so one
    /// representative suffices). `Simp` is deliberately excluded: it is not
    /// a strong Kleene connective, and the ST/CL agreement being checked is
    /// a fact about the strong Kleene fragment only (with `Simp` in the
    /// language, `~Simp A ⊨ Simp ~A` is CL-valid yet ST-invalid at A=1/2).
    pub fn pool(max_depth: usize, family: ConnectiveFamily) -> Vec<PoolEntry> {
        let mut seen: BTreeMap<[TruthValue; 9], Formula> = BTreeMap::new();
        for e in atom_vectors() {
            seen.entry(e.vector).or_insert(e.formula);
        }
        for _ in 0..max_depth {
            let current: Vec<([TruthValue; 9], Formula)> =
                seen.iter().map(|(v, f)| (*v, f.clone())).collect();
            for (v, f) in &current {
                seen.entry(apply1(TruthValue::neg, v))
                    .or_insert_with(|| Formula::not(f.clone()));
            }
            for (va, fa) in &current {
                for (vb, fb) in &current {
                    let candidates = [
                        (
                            apply2(crate::semantics::conj, va, vb),
                            Formula::and(fa.clone(), fb.clone()),
                        ),
                        (
                            apply2(crate::semantics::disj, va, vb),
                            Formula::or(fa.clone(), fb.clone()),
                        ),
                        (
                            apply2(|x, y| family.cond(x, y), va, vb),
                            Formula::cond(fa.clone(), fb.clone()),
                        ),
                        (
                            apply2(|x, y| family.bicond(x, y), va, vb),
                            Formula::bicond(fa.clone(), fb.clone()),
                        ),
                    ];
                    for (vec, g) in candidates {
                        seen.entry(vec).or_insert(g);
                    }
                }
            }
        }
        seen.into_iter()
            .map(|(vector, formula)| PoolEntry { formula, vector })
            .collect()
    }

    fn holds(r: Relation, premise: Option<&[TruthValue; 9]>, conclusion: &[TruthValue; 9]) -> bool {
        let idx: &[usize] = if r.classical_only() {
            &CLASSICAL_IDX
        } else {
            &[0, 1, 2, 3, 4, 5, 6, 7, 8]
        };
        let prem_std = r.premise_standard();
        let concl_std = r.conclusion_standard();
        idx.iter().all(|&i| {
            let prem_ok = premise.map(|p| prem_std.designates(p[i])).unwrap_or(true);
            !prem_ok || concl_std.designates(conclusion[i])
        })
    }

    #[derive(Debug, Default)]
    pub struct AgreementReport {
        pub pool_size: usize,
        pub sequents_checked: usize,
        /// Human-readable descriptions of any containment failures.
        pub violations: Vec<String>,
        pub ss_valid: usize,
        pub tt_valid: usize,
        pub st_valid: usize,
        pub ts_valid: usize,
        pub cl_valid: usize,
    }

    /// Check, exhaustively over single-premise (or premise-free) sequents
    /// from the depth-bounded pool: SS ⊆ ST, TS ⊆ SS ∩ TT, and ST = CL.
    pub fn classical_agreement(max_depth: usize, family: ConnectiveFamily) -> AgreementReport {
        let pool = pool(max_depth, family);
        let mut report = AgreementReport {
            pool_size: pool.len(),
            ..Default::default()
        };
        let premises: Vec<Option<&PoolEntry>> = std::iter::once(None)
            .chain(pool.iter().map(Some))
            .collect();
        for prem in &premises {
            let prem_vec = prem.map(|e| &e.vector);
            for concl in &pool {
                report.sequents_checked += 1;
                let describe = || {
                    let p = prem.map(|e| e.formula.to_string()).unwrap_or_default();
                    format!("{p} => {}", concl.formula)
                };
                let ss = holds(Relation::Ss, prem_vec, &concl.vector);
                let tt = holds(Relation::Tt, prem_vec, &concl.vector);
                let st = holds(Relation::St, prem_vec, &concl.vector);
                let ts = holds(Relation::Ts, prem_vec, &concl.vector);
                let cl = holds(Relation::Cl, prem_vec, &concl.vector);
                report.ss_valid += ss as usize;
                report.tt_valid += tt as usize;
                report.st_valid += st as usize;
                report.ts_valid += ts as usize;
                report.cl_valid += cl as usize;
                if ss && !st {
                    report.violations.push(format!("SS but not ST: {}", describe()));
                }
                if ts && !(ss && tt) {
                    report
                        .violations
                        .push(format!("TS outside SS∩TT: {}", describe()));
                }
                if st != cl {
                    report
                        .violations
                        .push(format!("ST/CL disagreement: {}", describe()));
                }
            }
        }
        report
    }
}
