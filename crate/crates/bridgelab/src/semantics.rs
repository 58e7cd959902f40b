//! Three-valued semantics: truth values, connective families, models, and
//! formula evaluation.

use std::collections::BTreeMap;
use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::syntax::{Formula, QuotationContext, SyntaxError, Term};

/// One of the three truth values: 0 (false), 1/2 (undetermined), 1 (true).
/// The derived order is the truth order 0 < 1/2 < 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TruthValue {
    Zero,
    Half,
    One,
}

pub use TruthValue::{Half, One, Zero};

impl TruthValue {
    pub const ALL: [TruthValue; 3] = [Zero, Half, One];
    pub const CLASSICAL: [TruthValue; 2] = [Zero, One];

    pub fn is_classical(self) -> bool {
        self != Half
    }

    /// Truth-order complement: 1 - v.
    pub fn neg(self) -> TruthValue {
        match self {
            Zero => One,
            Half => Half,
            One => Zero,
        }
    }
}

impl fmt::Display for TruthValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Zero => write!(f, "0"),
            Half => write!(f, "0.5"),
            One => write!(f, "1"),
        }
    }
}

impl Serialize for TruthValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Zero => s.serialize_u64(0),
            Half => s.serialize_f64(0.5),
            One => s.serialize_u64(1),
        }
    }
}

impl<'de> Deserialize<'de> for TruthValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let n = f64::deserialize(d)?;
        if n == 0.0 {
            Ok(Zero)
        } else if n == 0.5 {
            Ok(Half)
        } else if n == 1.0 {
            Ok(One)
        } else {
            Err(D::Error::custom(format!(
                "truth value must be 0, 0.5, or 1, got {n}"
            )))
        }
    }
}

/// Interpretation scheme for the conditional (and hence biconditional).
/// Negation, conjunction, and disjunction are strong Kleene in both.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ConnectiveFamily {
    /// Material conditional: a -> b = max(1-a, b).
    #[default]
    StrongKleene,
    /// Cooper's conditional: the consequent's value when the antecedent is
    /// at least 1/2, undetermined when the antecedent is false.
    Cooper,
}

impl fmt::Display for ConnectiveFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConnectiveFamily::StrongKleene => "strong-kleene",
            ConnectiveFamily::Cooper => "cooper",
        })
    }
}

impl ConnectiveFamily {
    pub fn cond(self, a: TruthValue, b: TruthValue) -> TruthValue {
        match self {
            ConnectiveFamily::StrongKleene => a.neg().max(b),
            ConnectiveFamily::Cooper => {
                if a == Zero {
                    Half
                } else {
                    b
                }
            }
        }
    }

    /// a <-> b = min(a -> b, b -> a) in either family.
    pub fn bicond(self, a: TruthValue, b: TruthValue) -> TruthValue {
        self.cond(a, b).min(self.cond(b, a))
    }
}

pub fn conj(a: TruthValue, b: TruthValue) -> TruthValue {
    a.min(b)
}

pub fn disj(a: TruthValue, b: TruthValue) -> TruthValue {
    a.max(b)
}

/// Bochvar's external assertion: `Simp p` is true when p is true, and false
/// when p is undetermined or false.
pub fn bochvar_simp(v: TruthValue) -> TruthValue {
    if v == One {
        One
    } else {
        Zero
    }
}

/// Which truth values count as "good enough" at a sequent position.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DesignationStandard {
    /// Only value 1.
    Strict,
    /// Values 1 and 1/2.
    Tolerant,
    /// Value 1, with the model required to be classical on the formula's
    /// atoms; in practice used only with classical enumeration.
    ClassicalTrue,
}

impl DesignationStandard {
    pub fn designates(self, v: TruthValue) -> bool {
        match self {
            DesignationStandard::Strict | DesignationStandard::ClassicalTrue => v == One,
            DesignationStandard::Tolerant => v >= Half,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SemanticsError {
    #[error("atom `{0}` has no value in the model")]
    UnvaluedAtom(String),
    #[error("sentence name `{0}` is not bound in the model")]
    UnboundName(String),
    #[error("circular reference while expanding sentence name `{0}`; give `True({0})` an explicit value")]
    CircularReference(String),
    #[error("`Fut` over a non-atomic formula needs a branching frame: `{0}`")]
    FutNeedsFrame(String),
    #[error("model has an empty domain but the formula is quantified")]
    EmptyDomain,
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
}

/// A (static) model: a finite domain, a value for each ground atom, the
/// quotation context binding sentence names, and a transparency flag.
///
/// Ground atoms are keyed by their canonical rendering, e.g. `Says(a,b)`,
/// `True(b)`, or `Fut Pun(a)` (a future-tensed ground atom treated as an
/// atomic unit when no frame is in play).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Model {
    pub domain: Vec<String>,
    pub atoms: BTreeMap<String, TruthValue>,
    pub names: QuotationContext,
    pub transparent: bool,
}

/// JSON wire form of a model; `names` maps sentence names to formula text.
#[derive(Debug, Serialize, Deserialize)]
struct ModelFile {
    domain: Vec<String>,
    atoms: BTreeMap<String, TruthValue>,
    #[serde(default)]
    names: BTreeMap<String, String>,
    #[serde(default)]
    transparent: bool,
}

impl Model {
    pub fn from_json(text: &str) -> Result<Model, SemanticsError> {
        let file: ModelFile = serde_json::from_str(text).map_err(|e| {
            SemanticsError::Syntax(SyntaxError::Parse {
                pos: 0,
                msg: format!("model JSON: {e}"),
            })
        })?;
        let ctx = crate::syntax::parse_name_map(&file.names)?;
        let mut domain = file.domain;
        domain.sort();
        domain.dedup();
        Ok(Model {
            domain,
            atoms: file.atoms,
            names: ctx,
            transparent: file.transparent,
        })
    }

    fn file(&self) -> ModelFile {
        ModelFile {
            domain: self.domain.clone(),
            atoms: self.atoms.clone(),
            names: self
                .names
                .iter()
                .map(|(n, f)| (n.clone(), f.to_string()))
                .collect(),
            transparent: self.transparent,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.file()).expect("model serializes")
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(self.file()).expect("model serializes")
    }

    fn lookup(&self, key: &str) -> Result<TruthValue, SemanticsError> {
        self.atoms
            .get(key)
            .copied()
            .ok_or_else(|| SemanticsError::UnvaluedAtom(key.to_string()))
    }
}

/// Evaluate a closed formula in a model under the given connective family.
pub fn eval(
    f: &Formula,
    model: &Model,
    family: ConnectiveFamily,
) -> Result<TruthValue, SemanticsError> {
    eval_guarded(f, model, family, &mut Vec::new())
}

fn eval_guarded(
    f: &Formula,
    model: &Model,
    family: ConnectiveFamily,
    expanding: &mut Vec<String>,
) -> Result<TruthValue, SemanticsError> {
    match f {
        Formula::Falsum => Ok(Zero),
        Formula::Atom(..) => model.lookup(&f.to_string()),
        Formula::TruePred(Term::Var(v)) => Err(SemanticsError::UnvaluedAtom(format!("True({v})"))),
        Formula::TruePred(Term::Const(n)) => {
            let key = format!("True({n})");
            if let Some(v) = model.atoms.get(&key) {
                return Ok(*v);
            }
            let referent = model
                .names
                .get(n)
                .ok_or_else(|| SemanticsError::UnboundName(n.clone()))?;
            if !model.transparent {
                return Err(SemanticsError::UnvaluedAtom(key));
            }
            if expanding.iter().any(|m| m == n) {
                return Err(SemanticsError::CircularReference(n.clone()));
            }
            expanding.push(n.clone());
            let v = eval_guarded(referent, model, family, expanding);
            expanding.pop();
            v
        }
        Formula::Not(a) => Ok(eval_guarded(a, model, family, expanding)?.neg()),
        Formula::And(a, b) => Ok(conj(
            eval_guarded(a, model, family, expanding)?,
            eval_guarded(b, model, family, expanding)?,
        )),
        Formula::Or(a, b) => Ok(disj(
            eval_guarded(a, model, family, expanding)?,
            eval_guarded(b, model, family, expanding)?,
        )),
        Formula::Cond(a, b) => Ok(family.cond(
            eval_guarded(a, model, family, expanding)?,
            eval_guarded(b, model, family, expanding)?,
        )),
        Formula::Bicond(a, b) => Ok(family.bicond(
            eval_guarded(a, model, family, expanding)?,
            eval_guarded(b, model, family, expanding)?,
        )),
        Formula::Simp(a) => Ok(bochvar_simp(eval_guarded(a, model, family, expanding)?)),
        Formula::Fut(body) => {
            // Without a branching frame a future-tensed ground atom is
            // treated as an atomic unit with its own model entry.
            if matches!(body.as_ref(), Formula::Atom(..)) && body.is_closed() {
                model.lookup(&f.to_string())
            } else {
                Err(SemanticsError::FutNeedsFrame(f.to_string()))
            }
        }
        Formula::Forall(v, body) => {
            if model.domain.is_empty() {
                return Err(SemanticsError::EmptyDomain);
            }
            let mut acc = One;
            for d in &model.domain {
                let inst = crate::syntax::instantiate(body, v, &Term::Const(d.clone()))?;
                acc = conj(acc, eval_guarded(&inst, model, family, expanding)?);
            }
            Ok(acc)
        }
        Formula::Exists(v, body) => {
            if model.domain.is_empty() {
                return Err(SemanticsError::EmptyDomain);
            }
            let mut acc = Zero;
            for d in &model.domain {
                let inst = crate::syntax::instantiate(body, v, &Term::Const(d.clone()))?;
                acc = disj(acc, eval_guarded(&inst, model, family, expanding)?);
            }
            Ok(acc)
        }
    }
}

/// Does the model satisfy the transparency constraint
/// v(True(n)) = v(referent of n) for every bound name whose truth atom has a
/// value?
pub fn check_transparency(
    model: &Model,
    family: ConnectiveFamily,
) -> Result<bool, SemanticsError> {
    for (n, referent) in model.names.iter() {
        let key = format!("True({n})");
        let Some(tv) = model.atoms.get(&key).copied() else {
            continue;
        };
        let mut expanding = vec![n.clone()];
        let rv = eval_guarded(referent, model, family, &mut expanding)?;
        if tv != rv {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    fn one_atom_model(key: &str, v: TruthValue) -> Model {
        let mut m = Model::default();
        m.atoms.insert(key.to_string(), v);
        m
    }

    #[test]
    fn strong_kleene_cond_table() {
        use ConnectiveFamily::StrongKleene as SK;
        let expect = [
            (Zero, Zero, One),
            (Zero, Half, One),
            (Zero, One, One),
            (Half, Zero, Half),
            (Half, Half, Half),
            (Half, One, One),
            (One, Zero, Zero),
            (One, Half, Half),
            (One, One, One),
        ];
        for (a, b, out) in expect {
            assert_eq!(SK.cond(a, b), out, "{a} -> {b}");
        }
    }

    #[test]
    fn cooper_cond_table() {
        use ConnectiveFamily::Cooper as C;
        let expect = [
            (Zero, Zero, Half),
            (Zero, Half, Half),
            (Zero, One, Half),
            (Half, Zero, Zero),
            (Half, Half, Half),
            (Half, One, One),
            (One, Zero, Zero),
            (One, Half, Half),
            (One, One, One),
        ];
        for (a, b, out) in expect {
            assert_eq!(C.cond(a, b), out, "{a} -> {b}");
        }
    }

    #[test]
    fn bochvar_simp_collapses_half() {
        assert_eq!(bochvar_simp(One), One);
        assert_eq!(bochvar_simp(Half), Zero);
        assert_eq!(bochvar_simp(Zero), Zero);
    }

    #[test]
    fn negation_of_simp_of_half_is_true() {
        // ~Simp p is true when p is undetermined.
        assert_eq!(bochvar_simp(Half).neg(), One);
    }

    #[test]
    fn de_morgan_holds_exhaustively() {
        for a in TruthValue::ALL {
            for b in TruthValue::ALL {
                assert_eq!(conj(a, b).neg(), disj(a.neg(), b.neg()));
                assert_eq!(disj(a, b).neg(), conj(a.neg(), b.neg()));
            }
        }
    }

    #[test]
    fn strong_kleene_connectives_are_monotone_in_information_order() {
        // Refining 1/2 to a classical value never flips an already-classical
        // output to the other classical value.
        let refines = |x: TruthValue, y: TruthValue| x == y || x == Half;
        let ops: [fn(TruthValue, TruthValue) -> TruthValue; 3] = [
            conj,
            disj,
            |a, b| ConnectiveFamily::StrongKleene.cond(a, b),
        ];
        for op in ops {
            for a in TruthValue::ALL {
                for b in TruthValue::ALL {
                    for a2 in TruthValue::ALL {
                        for b2 in TruthValue::ALL {
                            if refines(a, a2) && refines(b, b2) {
                                assert!(
                                    refines(op(a, b), op(a2, b2)),
                                    "monotonicity fails at {a},{b} -> {a2},{b2}"
                                );
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn eval_fut_ground_atom_reads_model_entry() {
        let m = one_atom_model("Fut Pun(a)", Half);
        let f = parse("Fut Pun(a)", &QuotationContext::new()).unwrap();
        assert_eq!(eval(&f, &m, ConnectiveFamily::StrongKleene), Ok(Half));
    }

    #[test]
    fn eval_fut_compound_without_frame_errors() {
        let m = one_atom_model("Pun(a)", One);
        let f = parse("Fut (Pun(a) | ~Pun(a))", &QuotationContext::new()).unwrap();
        assert!(matches!(
            eval(&f, &m, ConnectiveFamily::StrongKleene),
            Err(SemanticsError::FutNeedsFrame(_))
        ));
    }

    #[test]
    fn eval_true_pred_prefers_explicit_atom() {
        let mut m = one_atom_model("True(b)", Half);
        m.names.bind(
            "b",
            parse("Fut Pun(a)", &QuotationContext::new()).unwrap(),
        );
        m.transparent = true;
        let mut ctx = QuotationContext::new();
        ctx.bind("b", parse("Fut Pun(a)", &QuotationContext::new()).unwrap());
        let f = parse("True(b)", &ctx).unwrap();
        assert_eq!(eval(&f, &m, ConnectiveFamily::StrongKleene), Ok(Half));
    }

    #[test]
    fn eval_true_pred_falls_through_to_referent_when_transparent() {
        let mut m = one_atom_model("Fut Pun(a)", One);
        m.names.bind(
            "b",
            parse("Fut Pun(a)", &QuotationContext::new()).unwrap(),
        );
        m.transparent = true;
        let mut ctx = QuotationContext::new();
        ctx.bind("b", parse("Fut Pun(a)", &QuotationContext::new()).unwrap());
        let f = parse("True(b)", &ctx).unwrap();
        assert_eq!(eval(&f, &m, ConnectiveFamily::StrongKleene), Ok(One));
    }

    #[test]
    fn liar_without_explicit_value_reports_circularity() {
        let (ctx, _) = crate::syntax::parse_context("name l := ~True(l)\n").unwrap();
        let mut m = Model {
            transparent: true,
            ..Default::default()
        };
        m.names = ctx.clone();
        let f = parse("True(l)", &ctx).unwrap();
        assert!(matches!(
            eval(&f, &m, ConnectiveFamily::StrongKleene),
            Err(SemanticsError::CircularReference(_))
        ));
    }

    #[test]
    fn liar_transparency_forces_half() {
        let (ctx, _) = crate::syntax::parse_context("name l := ~True(l)\n").unwrap();
        let mut solutions = Vec::new();
        for v in TruthValue::ALL {
            let mut m = Model {
                transparent: true,
                ..Default::default()
            };
            m.names = ctx.clone();
            m.atoms.insert("True(l)".into(), v);
            if check_transparency(&m, ConnectiveFamily::StrongKleene).unwrap() {
                solutions.push(v);
            }
        }
        assert_eq!(solutions, vec![Half]);
    }

    #[test]
    fn quantifier_eval_over_domain() {
        let mut m = Model {
            domain: vec!["a".into(), "b".into()],
            ..Default::default()
        };
        m.atoms.insert("Pun(a)".into(), One);
        m.atoms.insert("Pun(b)".into(), Half);
        let all = parse("forall x. Pun(x)", &QuotationContext::new()).unwrap();
        let some = parse("exists x. Pun(x)", &QuotationContext::new()).unwrap();
        assert_eq!(eval(&all, &m, ConnectiveFamily::StrongKleene), Ok(Half));
        assert_eq!(eval(&some, &m, ConnectiveFamily::StrongKleene), Ok(One));
    }

    #[test]
    fn model_json_round_trip() {
        let text = r#"{
            "domain": ["a", "b"],
            "atoms": {"Says(a,b)": 1, "True(b)": 0.5, "Fut Pun(a)": 0.5},
            "names": {"b": "Fut Pun(a)"},
            "transparent": true
        }"#;
        let m = Model::from_json(text).unwrap();
        assert_eq!(m.atoms["True(b)"], Half);
        assert!(m.transparent);
        let m2 = Model::from_json(&m.to_json()).unwrap();
        assert_eq!(m, m2);
    }
}
