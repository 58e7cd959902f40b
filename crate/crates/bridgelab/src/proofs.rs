//! Natural-deduction proofs with the Bridge rule set, checked per step.
//!
//! A proof script is a header (name/def/transparent/domain declarations)
//! followed by one step per line:
//!
//! ```text
//! name b := Fut Pun(a)
//! def T := forall x. forall y. (Says(x,y) -> (True(y) -> ~Fut Pun(x)))
//! transparent true
//! domain a b
//!
//! 1: premise Says(a,b)
//! 2: hyp h1 Fut Pun(a)
//! 3: condI [2] discharge h1 Fut Pun(a) -> Fut Pun(a)
//! ```
//!
//! Each step projects to a local sequent: its open assumptions (premises
//! and undischarged hypotheses of its subtree) entail its conclusion. Most
//! rules are then judged by deciding that sequent under the requested
//! relation. The discharge rules (`condI`, `reductio`) are metainferences:
//! from Γ, A ⊨ B conclude Γ ⊨ A → B (or, with B = ⊥, Γ ⊨ ¬A). That schema
//! is sound for CL, TT, ST, and TS, so for those relations the plain local
//! sequent is decided. It is *not* sound for ss-consequence: from
//! Γ, A ⊨ss ⊥ one only learns that A is never strict when Γ is, which
//! leaves ¬A free to take the value 1/2. For SS the checker therefore
//! searches for a gap witness — an admissible model where the remaining
//! open assumptions all hold at least tolerantly, the discharged hypothesis
//! is not strict, and the conclusion is not strict either — and reports the
//! step invalid with that model as countermodel when one exists.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::consequence::{
    admissible_models, valid, ConsequenceError, Relation, Sequent, Verdict,
};
use crate::semantics::{eval, ConnectiveFamily, Half, One};
use crate::syntax::{
    instantiate, parse_with_defs, Definitions, Formula, QuotationContext, SyntaxError, Term,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    Premise,
    Hyp,
    AndE,
    AndI,
    OrE,
    CondE,
    CondI,
    ForallE,
    Tr,
    NegTr,
    BicondI,
    SRule,
    Efq,
    Reductio,
}

impl Rule {
    /// Does this rule discharge hypotheses as a metainference?
    fn is_discharge(self) -> bool {
        matches!(self, Rule::CondI | Rule::Reductio)
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Rule::Premise => "premise",
            Rule::Hyp => "hyp",
            Rule::AndE => "andE",
            Rule::AndI => "andI",
            Rule::OrE => "orE",
            Rule::CondE => "condE",
            Rule::CondI => "condI",
            Rule::ForallE => "forallE",
            Rule::Tr => "tr",
            Rule::NegTr => "negTr",
            Rule::BicondI => "bicondI",
            Rule::SRule => "sRule",
            Rule::Efq => "efq",
            Rule::Reductio => "reductio",
        };
        write!(f, "{s}")
    }
}

impl FromStr for Rule {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "premise" => Rule::Premise,
            "hyp" => Rule::Hyp,
            "andE" => Rule::AndE,
            "andI" => Rule::AndI,
            "orE" => Rule::OrE,
            "condE" => Rule::CondE,
            "condI" => Rule::CondI,
            "forallE" => Rule::ForallE,
            "tr" => Rule::Tr,
            "negTr" => Rule::NegTr,
            "bicondI" => Rule::BicondI,
            "sRule" => Rule::SRule,
            "efq" => Rule::Efq,
            "reductio" => Rule::Reductio,
            other => return Err(format!("unknown rule `{other}`")),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub id: String,
    pub rule: Rule,
    pub children: Vec<String>,
    pub discharges: Vec<String>,
    /// Hypothesis label, for `hyp` steps.
    pub label: Option<String>,
    pub formula: Formula,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Proof {
    pub steps: Vec<Step>,
    pub ctx: QuotationContext,
    pub defs: Definitions,
    pub transparent: bool,
    pub domain: Vec<String>,
    index: BTreeMap<String, usize>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ProofError {
    #[error("line {line}: {msg}")]
    Script { line: usize, msg: String },
    #[error("step {step}: {msg}")]
    Shape { step: String, msg: String },
    #[error("unknown builtin proof `{0}` (expected bridge-future, bridge-truth, buridan-reductio, jacquette, lem-reductio, or church)")]
    UnknownBuiltin(String),
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error(transparent)]
    Consequence(#[from] ConsequenceError),
}

/// Open assumptions of a subtree: undischarged hypotheses (by label) plus
/// the premise formulas in play.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OpenAssumptions {
    pub hyps: BTreeMap<String, Formula>,
    pub premises: BTreeSet<Formula>,
}

impl OpenAssumptions {
    /// Premise list for the step's local sequent, deduplicated and in
    /// canonical order.
    pub fn to_premises(&self) -> Vec<Formula> {
        let mut set: BTreeSet<Formula> = self.premises.clone();
        set.extend(self.hyps.values().cloned());
        set.into_iter().collect()
    }
}

#[derive(Debug, Clone)]
pub struct StepVerdict {
    pub id: String,
    pub rule: Rule,
    pub sequent: Sequent,
    pub per_relation: BTreeMap<Relation, Verdict>,
}

impl StepVerdict {
    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::json!({
            "id": self.id,
            "rule": self.rule.to_string(),
            "premises": self.sequent.premises.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
            "conclusion": self.sequent.conclusion.to_string(),
            "perRelation": self.per_relation.iter().map(|(r, v)| {
                (r.to_string(), v.to_json_value())
            }).collect::<serde_json::Map<_, _>>(),
        })
    }
}

impl Proof {
    pub fn from_script(text: &str) -> Result<Proof, ProofError> {
        let mut header = String::new();
        let mut transparent = false;
        let mut domain: Vec<String> = Vec::new();
        let mut step_lines: Vec<(usize, &str)> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |msg: String| ProofError::Script {
                line: lineno + 1,
                msg,
            };
            if line.starts_with("name ") || line.starts_with("def ") {
                header.push_str(line);
                header.push('\n');
            } else if let Some(rest) = line.strip_prefix("transparent ") {
                transparent = match rest.trim() {
                    "true" => true,
                    "false" => false,
                    other => return Err(err(format!("expected true/false, got `{other}`"))),
                };
            } else if let Some(rest) = line.strip_prefix("domain ") {
                domain = rest.split_whitespace().map(str::to_string).collect();
                domain.sort();
                domain.dedup();
            } else if line.contains(':') {
                step_lines.push((lineno + 1, line));
            } else {
                return Err(err(format!("unrecognized line `{line}`")));
            }
        }
        let (ctx, defs) = crate::syntax::parse_context(&header)?;
        let mut steps = Vec::new();
        let mut index = BTreeMap::new();
        for (lineno, line) in step_lines {
            let err = |msg: String| ProofError::Script { line: lineno, msg };
            let (id, rest) = line.split_once(':').expect("checked above");
            let id = id.trim().to_string();
            let rest = rest.trim();
            let (rule_name, rest) = rest
                .split_once(char::is_whitespace)
                .ok_or_else(|| err("expected a rule and a formula".into()))?;
            let rule: Rule = rule_name.parse().map_err(err)?;
            let mut rest = rest.trim();
            let mut children = Vec::new();
            let mut discharges = Vec::new();
            let mut label = None;
            match rule {
                Rule::Hyp => {
                    let (l, f) = rest
                        .split_once(char::is_whitespace)
                        .ok_or_else(|| err("hyp needs a label and a formula".into()))?;
                    label = Some(l.to_string());
                    rest = f.trim();
                }
                Rule::Premise => {}
                _ => {
                    if let Some(after) = rest.strip_prefix('[') {
                        let (inside, tail) = after
                            .split_once(']')
                            .ok_or_else(|| err("unclosed `[` in child list".into()))?;
                        children = inside
                            .split(',')
                            .map(|c| c.trim().to_string())
                            .filter(|c| !c.is_empty())
                            .collect();
                        rest = tail.trim();
                    } else {
                        return Err(err(format!("rule `{rule}` needs a [child] list")));
                    }
                    if let Some(after) = rest.strip_prefix("discharge ") {
                        let (labels, tail) = after
                            .split_once(char::is_whitespace)
                            .ok_or_else(|| err("discharge needs labels and a formula".into()))?;
                        discharges = labels.split(',').map(|l| l.trim().to_string()).collect();
                        rest = tail.trim();
                    }
                }
            }
            let formula = parse_with_defs(rest, &ctx, &defs)?;
            if index.insert(id.clone(), steps.len()).is_some() {
                return Err(err(format!("duplicate step id `{id}`")));
            }
            steps.push(Step {
                id,
                rule,
                children,
                discharges,
                label,
                formula,
            });
        }
        if steps.is_empty() {
            return Err(ProofError::Script {
                line: 0,
                msg: "proof has no steps".into(),
            });
        }
        let mut domain_set: BTreeSet<String> = domain.iter().cloned().collect();
        for s in &steps {
            domain_set.extend(s.formula.constants());
        }
        for (n, f) in ctx.iter() {
            domain_set.insert(n.clone());
            domain_set.extend(f.constants());
        }
        let proof = Proof {
            steps,
            ctx,
            defs,
            transparent,
            domain: domain_set.into_iter().collect(),
            index,
        };
        proof.check_syntax()?;
        Ok(proof)
    }

    pub fn root(&self) -> &Step {
        self.steps.last().expect("non-empty")
    }

    fn step(&self, id: &str) -> Result<&Step, ProofError> {
        self.index
            .get(id)
            .map(|&i| &self.steps[i])
            .ok_or_else(|| ProofError::Shape {
                step: id.to_string(),
                msg: "refers to an unknown step".into(),
            })
    }

    fn child(&self, s: &Step, k: usize) -> Result<&Step, ProofError> {
        let id = s.children.get(k).ok_or_else(|| ProofError::Shape {
            step: s.id.clone(),
            msg: format!("{} requires at least {} children", s.rule, k + 1),
        })?;
        let c = self.step(id)?;
        if self.index[&c.id] >= self.index[&s.id] {
            return Err(ProofError::Shape {
                step: s.id.clone(),
                msg: format!("child `{id}` must be defined before its use"),
            });
        }
        Ok(c)
    }

    /// Open assumptions of the subtree rooted at `id`, with discharge
    /// bookkeeping applied.
    pub fn opens(&self, id: &str) -> Result<OpenAssumptions, ProofError> {
        let s = self.step(id)?;
        let mut acc = OpenAssumptions::default();
        match s.rule {
            Rule::Premise => {
                acc.premises.insert(s.formula.clone());
            }
            Rule::Hyp => {
                let label = s.label.clone().expect("hyp has a label");
                acc.hyps.insert(label, s.formula.clone());
            }
            Rule::OrE => {
                // The two case subproofs discharge their respective labels.
                let disjunction = self.opens(&s.children[0])?;
                let mut left = self.opens(&s.children[1])?;
                let mut right = self.opens(&s.children[2])?;
                left.hyps.remove(&s.discharges[0]);
                right.hyps.remove(&s.discharges[1]);
                for part in [disjunction, left, right] {
                    acc.hyps.extend(part.hyps);
                    acc.premises.extend(part.premises);
                }
            }
            Rule::CondI | Rule::Reductio => {
                let mut inner = self.opens(&s.children[0])?;
                inner.hyps.remove(&s.discharges[0]);
                acc = inner;
            }
            _ => {
                for c in &s.children {
                    let part = self.opens(c)?;
                    acc.hyps.extend(part.hyps);
                    acc.premises.extend(part.premises);
                }
            }
        }
        Ok(acc)
    }

    /// The local sequent of a step: open assumptions ⊢ conclusion.
    pub fn local_sequent(&self, id: &str) -> Result<Sequent, ProofError> {
        let s = self.step(id)?;
        Ok(Sequent {
            premises: self.opens(id)?.to_premises(),
            conclusion: s.formula.clone(),
            domain: self.domain.clone(),
            ctx: self.ctx.clone(),
            transparent: self.transparent,
        })
    }

    fn shape_err(&self, s: &Step, msg: impl Into<String>) -> ProofError {
        ProofError::Shape {
            step: s.id.clone(),
            msg: msg.into(),
        }
    }

    fn expect_children(&self, s: &Step, n: usize) -> Result<(), ProofError> {
        if s.children.len() != n {
            return Err(self.shape_err(
                s,
                format!("{} takes {n} children, got {}", s.rule, s.children.len()),
            ));
        }
        Ok(())
    }

    fn expect_discharges(&self, s: &Step, n: usize) -> Result<(), ProofError> {
        if s.discharges.len() != n {
            return Err(self.shape_err(
                s,
                format!(
                    "{} discharges {n} label(s), got {}",
                    s.rule,
                    s.discharges.len()
                ),
            ));
        }
        Ok(())
    }

    /// Formula of hypothesis `label`, which must be open in the subtree at
    /// `within`.
    fn open_hyp(&self, s: &Step, label: &str, within: &str) -> Result<Formula, ProofError> {
        let opens = self.opens(within)?;
        opens.hyps.get(label).cloned().ok_or_else(|| {
            self.shape_err(
                s,
                format!("discharged label `{label}` is not open in the subtree at `{within}`"),
            )
        })
    }

    /// Verify every step's rule side-condition and discharge bookkeeping.
    pub fn check_syntax(&self) -> Result<(), ProofError> {
        for s in &self.steps {
            self.check_step_shape(s)?;
        }
        let root_opens = self.opens(&self.root().id)?;
        if let Some(label) = root_opens.hyps.keys().next() {
            return Err(ProofError::Shape {
                step: self.root().id.clone(),
                msg: format!("hypothesis `{label}` is never discharged"),
            });
        }
        Ok(())
    }

    fn check_step_shape(&self, s: &Step) -> Result<(), ProofError> {
        match s.rule {
            Rule::Premise => self.expect_children(s, 0),
            Rule::Hyp => {
                self.expect_children(s, 0)?;
                if s.label.is_none() {
                    return Err(self.shape_err(s, "hyp needs a label"));
                }
                Ok(())
            }
            Rule::AndE => {
                self.expect_children(s, 1)?;
                let c = self.child(s, 0)?;
                match &c.formula {
                    Formula::And(a, b) if **a == s.formula || **b == s.formula => Ok(()),
                    _ => Err(self.shape_err(s, "andE concludes a conjunct of its child")),
                }
            }
            Rule::AndI => {
                self.expect_children(s, 2)?;
                let (a, b) = (self.child(s, 0)?, self.child(s, 1)?);
                if s.formula == Formula::and(a.formula.clone(), b.formula.clone()) {
                    Ok(())
                } else {
                    Err(self.shape_err(s, "andI concludes the conjunction of its children"))
                }
            }
            Rule::OrE => {
                self.expect_children(s, 3)?;
                self.expect_discharges(s, 2)?;
                let d = self.child(s, 0)?;
                let Formula::Or(a, b) = &d.formula else {
                    return Err(self.shape_err(s, "orE's first child must be a disjunction"));
                };
                let (l, r) = (self.child(s, 1)?, self.child(s, 2)?);
                if l.formula != s.formula || r.formula != s.formula {
                    return Err(
                        self.shape_err(s, "both orE case subproofs must conclude the conclusion")
                    );
                }
                let ha = self.open_hyp(s, &s.discharges[0], &l.id)?;
                let hb = self.open_hyp(s, &s.discharges[1], &r.id)?;
                if ha != **a || hb != **b {
                    return Err(self.shape_err(
                        s,
                        "discharged hypotheses must match the disjuncts in order",
                    ));
                }
                Ok(())
            }
            Rule::CondE => {
                self.expect_children(s, 2)?;
                let (major, minor) = (self.child(s, 0)?, self.child(s, 1)?);
                match &major.formula {
                    Formula::Cond(a, b) if **a == minor.formula && **b == s.formula => Ok(()),
                    Formula::Cond(..) => {
                        Err(self.shape_err(s, "condE's minor premise must match the antecedent"))
                    }
                    _ => Err(self.shape_err(s, "condE's first child must be a conditional")),
                }
            }
            Rule::CondI => {
                self.expect_children(s, 1)?;
                self.expect_discharges(s, 1)?;
                let c = self.child(s, 0)?;
                let hyp = self.open_hyp(s, &s.discharges[0], &c.id)?;
                if s.formula == Formula::cond(hyp, c.formula.clone()) {
                    Ok(())
                } else {
                    Err(self.shape_err(
                        s,
                        "condI concludes hypothesis -> child conclusion",
                    ))
                }
            }
            Rule::ForallE => {
                self.expect_children(s, 1)?;
                let c = self.child(s, 0)?;
                let Formula::Forall(v, body) = &c.formula else {
                    return Err(self.shape_err(s, "forallE's child must be universal"));
                };
                for d in &self.domain {
                    if instantiate(body, v, &Term::Const(d.clone()))? == s.formula {
                        return Ok(());
                    }
                }
                Err(self.shape_err(
                    s,
                    "forallE concludes an instance of its child over the domain",
                ))
            }
            Rule::Tr => {
                self.expect_children(s, 1)?;
                let c = self.child(s, 0)?;
                for (n, referent) in self.ctx.iter() {
                    let truth = Formula::TruePred(Term::Const(n.clone()));
                    if (c.formula == *referent && s.formula == truth)
                        || (c.formula == truth && s.formula == *referent)
                    {
                        return Ok(());
                    }
                }
                Err(self.shape_err(s, "tr exchanges True(n) with n's referent"))
            }
            Rule::NegTr => {
                self.expect_children(s, 1)?;
                let c = self.child(s, 0)?;
                for (n, referent) in self.ctx.iter() {
                    let neg_truth = Formula::not(Formula::TruePred(Term::Const(n.clone())));
                    let neg_ref = Formula::not(referent.clone());
                    if (c.formula == neg_ref && s.formula == neg_truth)
                        || (c.formula == neg_truth && s.formula == neg_ref)
                    {
                        return Ok(());
                    }
                }
                Err(self.shape_err(s, "negTr exchanges ~True(n) with the negated referent"))
            }
            Rule::BicondI => {
                self.expect_children(s, 2)?;
                let (l, r) = (self.child(s, 0)?, self.child(s, 1)?);
                match (&l.formula, &r.formula) {
                    (Formula::Cond(a, b), Formula::Cond(b2, a2))
                        if a == a2
                            && b == b2
                            && s.formula == Formula::bicond((**a).clone(), (**b).clone()) =>
                    {
                        Ok(())
                    }
                    _ => Err(self.shape_err(
                        s,
                        "bicondI needs a -> b and b -> a, concluding a <-> b",
                    )),
                }
            }
            Rule::SRule => {
                self.expect_children(s, 1)?;
                let c = self.child(s, 0)?;
                let Formula::Bicond(a, neg) = &c.formula else {
                    return Err(self.shape_err(s, "sRule's child must be a biconditional"));
                };
                if **neg != Formula::not((**a).clone()) {
                    return Err(self.shape_err(s, "sRule's child must have shape a <-> ~a"));
                }
                let expected = Formula::and(
                    Formula::not(Formula::simp((**a).clone())),
                    Formula::not(Formula::simp(Formula::not((**a).clone()))),
                );
                if s.formula == expected {
                    Ok(())
                } else {
                    Err(self.shape_err(s, "sRule concludes ~Simp a & ~Simp ~a"))
                }
            }
            Rule::Efq => {
                self.expect_children(s, 1)?;
                let c = self.child(s, 0)?;
                let Formula::And(a, neg) = &c.formula else {
                    return Err(self.shape_err(s, "efq's child must be a contradiction a & ~a"));
                };
                if **neg != Formula::not((**a).clone()) {
                    return Err(self.shape_err(s, "efq's child must be a contradiction a & ~a"));
                }
                if s.formula == Formula::Falsum {
                    Ok(())
                } else {
                    Err(self.shape_err(s, "efq concludes _|_"))
                }
            }
            Rule::Reductio => {
                self.expect_children(s, 1)?;
                self.expect_discharges(s, 1)?;
                let c = self.child(s, 0)?;
                if c.formula != Formula::Falsum {
                    return Err(self.shape_err(s, "reductio's child must conclude _|_"));
                }
                let hyp = self.open_hyp(s, &s.discharges[0], &c.id)?;
                if s.formula == Formula::not(hyp) {
                    Ok(())
                } else {
                    Err(self.shape_err(s, "reductio concludes the negated hypothesis"))
                }
            }
        }
    }
}

/// For SS, a discharge step is checked as a metainference; see the module
/// docs. Returns `Ok(Some(..))` when a gap witness refutes it.
fn ss_gap_witness(
    p: &Proof,
    step: &Step,
    seq: &Sequent,
    family: ConnectiveFamily,
    cap: usize,
) -> Result<Option<(crate::semantics::Model, usize)>, ProofError> {
    let hyp = p.open_hyp(step, &step.discharges[0], &step.children[0])?;
    // Enumerate over the atoms of opens + hypothesis + conclusion.
    let mut search = seq.clone();
    search.premises.push(hyp.clone());
    let mut checked = 0;
    for m in admissible_models(&search, false, family, cap)? {
        checked += 1;
        let opens_tolerant = seq
            .premises
            .iter()
            .map(|f| eval(f, &m, family))
            .collect::<Result<Vec<_>, _>>()
            .map_err(ConsequenceError::from)?
            .into_iter()
            .all(|v| v >= Half);
        if !opens_tolerant {
            continue;
        }
        let hyp_not_strict = eval(&hyp, &m, family).map_err(ConsequenceError::from)? < One;
        let concl_not_strict =
            eval(&seq.conclusion, &m, family).map_err(ConsequenceError::from)? < One;
        if hyp_not_strict && concl_not_strict {
            return Ok(Some((m, checked)));
        }
    }
    Ok(None)
}

fn check_step(
    p: &Proof,
    step: &Step,
    seq: &Sequent,
    r: Relation,
    family: ConnectiveFamily,
    cap: usize,
) -> Result<Verdict, ProofError> {
    if r == Relation::Ss && step.rule.is_discharge() {
        if let Some((model, checked)) = ss_gap_witness(p, step, seq, family, cap)? {
            return Ok(Verdict {
                valid: false,
                countermodel: Some(model),
                models_checked: checked,
            });
        }
    }
    Ok(valid(seq, r, family, cap)?)
}

/// Decide every step's local sequent under each requested relation.
pub fn check_proof(
    p: &Proof,
    relations: &[Relation],
    family: ConnectiveFamily,
    cap: usize,
) -> Result<Vec<StepVerdict>, ProofError> {
    p.check_syntax()?;
    let mut out = Vec::new();
    for s in &p.steps {
        let seq = p.local_sequent(&s.id)?;
        let mut per_relation = BTreeMap::new();
        for &r in relations {
            per_relation.insert(r, check_step(p, s, &seq, r, family, cap)?);
        }
        out.push(StepVerdict {
            id: s.id.clone(),
            rule: s.rule,
            sequent: seq,
            per_relation,
        });
    }
    Ok(out)
}

pub const BUILTIN_NAMES: [&str; 6] = [
    "bridge-future",
    "bridge-truth",
    "buridan-reductio",
    "jacquette",
    "lem-reductio",
    "church",
];

/// The six proof trees shipped with the crate.
pub fn builtin(name: &str) -> Result<Proof, ProofError> {
    let script = match name {
        "bridge-future" => include_str!("../proofs/bridge-future.proof"),
        "bridge-truth" => include_str!("../proofs/bridge-truth.proof"),
        "buridan-reductio" => include_str!("../proofs/buridan-reductio.proof"),
        "jacquette" => include_str!("../proofs/jacquette.proof"),
        "lem-reductio" => include_str!("../proofs/lem-reductio.proof"),
        "church" => include_str!("../proofs/church.proof"),
        other => return Err(ProofError::UnknownBuiltin(other.to_string())),
    };
    Proof::from_script(script)
}
