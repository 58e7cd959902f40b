//! Branching-time frames and the supervaluationist semantics for `Fut`.
//!
//! A frame is a finite tree of moments. A history is a maximal chain, i.e.
//! a root-to-leaf path; histories are labeled `h1`, `h2`, ... in the sorted
//! order of their moment sequences. Fut-free atoms take classical values at
//! (history, moment) pairs, supplied by the frame's valuation.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::semantics::{bochvar_simp, conj, disj, ConnectiveFamily, Half, One, TruthValue, Zero};
use crate::syntax::Formula;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TemporalError {
    #[error("frame has no moments")]
    Empty,
    #[error("frame must have exactly one root, found {0:?}")]
    RootCount(Vec<String>),
    #[error("moment `{0}` has more than one parent; frames must be trees")]
    NotPastLinear(String),
    #[error("edge mentions unknown moment `{0}`")]
    UnknownMoment(String),
    #[error("moment `{0}` is not in the frame")]
    NoSuchMoment(String),
    #[error("history `{0}` is not in the frame")]
    NoSuchHistory(String),
    #[error("atom `{atom}` has no classical value at {history}@{moment}")]
    UnvaluedAtom {
        atom: String,
        history: String,
        moment: String,
    },
    #[error("`Fut` body must not contain `Fut` or `True`: `{0}`")]
    IllFormedFutBody(String),
    #[error("quantifiers are not supported in frame evaluation: `{0}`")]
    Quantified(String),
    #[error(
        "conflict: `{body}` is both settled-true and settled-false after `{moment}` \
         (each of {histories:?} contains later points with both values)"
    )]
    Conflict {
        body: String,
        moment: String,
        histories: Vec<String>,
    },
}

/// Frame file wire format. `valuation` is keyed `"<history>@<moment>"`,
/// e.g. `"h1@t2"`, each entry giving classical atom values at that point.
#[derive(Debug, Serialize, Deserialize)]
struct FrameFile {
    moments: Vec<String>,
    edges: Vec<(String, String)>,
    #[serde(default)]
    valuation: BTreeMap<String, BTreeMap<String, u8>>,
}

/// A labeled history: the moments of one root-to-leaf path, in order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct History {
    pub label: String,
    pub moments: Vec<String>,
}

impl History {
    pub fn contains(&self, moment: &str) -> bool {
        self.moments.iter().any(|m| m == moment)
    }

    /// Moments strictly after `moment` on this history.
    fn later(&self, moment: &str) -> &[String] {
        match self.moments.iter().position(|m| m == moment) {
            Some(i) => &self.moments[i + 1..],
            None => &[],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchingFrame {
    pub moments: Vec<String>,
    pub root: String,
    histories: Vec<History>,
    /// (history label, moment) -> atom -> classical value.
    valuation: BTreeMap<(String, String), BTreeMap<String, bool>>,
}

impl BranchingFrame {
    pub fn from_json(text: &str) -> Result<BranchingFrame, TemporalError> {
        let file: FrameFile =
            serde_json::from_str(text).map_err(|e| TemporalError::RootCount(vec![e.to_string()]))?;
        Self::build(file)
    }

    fn build(file: FrameFile) -> Result<BranchingFrame, TemporalError> {
        if file.moments.is_empty() {
            return Err(TemporalError::Empty);
        }
        let moments: BTreeSet<String> = file.moments.iter().cloned().collect();
        let mut children: BTreeMap<String, Vec<String>> = BTreeMap::new();
        let mut parent: BTreeMap<String, String> = BTreeMap::new();
        for (p, c) in &file.edges {
            for m in [p, c] {
                if !moments.contains(m) {
                    return Err(TemporalError::UnknownMoment(m.clone()));
                }
            }
            if parent.insert(c.clone(), p.clone()).is_some() {
                return Err(TemporalError::NotPastLinear(c.clone()));
            }
            children.entry(p.clone()).or_default().push(c.clone());
        }
        for kids in children.values_mut() {
            kids.sort();
        }
        let roots: Vec<String> = moments
            .iter()
            .filter(|m| !parent.contains_key(*m))
            .cloned()
            .collect();
        let root = match roots.as_slice() {
            [r] => r.clone(),
            _ => return Err(TemporalError::RootCount(roots)),
        };
        // Enumerate root-to-leaf paths depth-first; children were sorted, so
        // the paths come out in lexicographic order of their moment lists.
        let mut paths: Vec<Vec<String>> = Vec::new();
        let mut stack = vec![vec![root.clone()]];
        while let Some(path) = stack.pop() {
            let tip = path.last().unwrap();
            match children.get(tip) {
                Some(kids) if !kids.is_empty() => {
                    // Push in reverse so the lexicographically first child is
                    // explored first.
                    for k in kids.iter().rev() {
                        let mut next = path.clone();
                        next.push(k.clone());
                        stack.push(next);
                    }
                }
                _ => paths.push(path),
            }
        }
        let histories: Vec<History> = paths
            .into_iter()
            .enumerate()
            .map(|(i, moments)| History {
                label: format!("h{}", i + 1),
                moments,
            })
            .collect();
        let mut valuation = BTreeMap::new();
        for (key, atoms) in file.valuation {
            let Some((h, t)) = key.split_once('@') else {
                return Err(TemporalError::NoSuchMoment(key));
            };
            if !histories.iter().any(|hist| hist.label == h) {
                return Err(TemporalError::NoSuchHistory(h.to_string()));
            }
            if !moments.contains(t) {
                return Err(TemporalError::NoSuchMoment(t.to_string()));
            }
            let vals = atoms.into_iter().map(|(a, v)| (a, v != 0)).collect();
            valuation.insert((h.to_string(), t.to_string()), vals);
        }
        Ok(BranchingFrame {
            moments: file.moments,
            root,
            histories,
            valuation,
        })
    }

    pub fn all_histories(&self) -> &[History] {
        &self.histories
    }

    /// The histories passing through `t`.
    pub fn histories(&self, t: &str) -> Result<Vec<&History>, TemporalError> {
        if !self.moments.iter().any(|m| m == t) {
            return Err(TemporalError::NoSuchMoment(t.to_string()));
        }
        Ok(self.histories.iter().filter(|h| h.contains(t)).collect())
    }

    pub fn history(&self, label: &str) -> Result<&History, TemporalError> {
        self.histories
            .iter()
            .find(|h| h.label == label)
            .ok_or_else(|| TemporalError::NoSuchHistory(label.to_string()))
    }

    fn atom_at(&self, h: &History, t: &str, atom: &str) -> Result<bool, TemporalError> {
        self.valuation
            .get(&(h.label.clone(), t.to_string()))
            .and_then(|m| m.get(atom).copied())
            .ok_or_else(|| TemporalError::UnvaluedAtom {
                atom: atom.to_string(),
                history: h.label.clone(),
                moment: t.to_string(),
            })
    }

    /// Classical evaluation of a Fut-free, True-free formula at a
    /// (history, moment) point.
    fn eval_point(&self, f: &Formula, h: &History, t: &str) -> Result<bool, TemporalError> {
        match f {
            Formula::Falsum => Ok(false),
            Formula::Atom(..) => self.atom_at(h, t, &f.to_string()),
            Formula::Not(a) => Ok(!self.eval_point(a, h, t)?),
            Formula::And(a, b) => Ok(self.eval_point(a, h, t)? && self.eval_point(b, h, t)?),
            Formula::Or(a, b) => Ok(self.eval_point(a, h, t)? || self.eval_point(b, h, t)?),
            Formula::Cond(a, b) => Ok(!self.eval_point(a, h, t)? || self.eval_point(b, h, t)?),
            Formula::Bicond(a, b) => Ok(self.eval_point(a, h, t)? == self.eval_point(b, h, t)?),
            Formula::Simp(a) => self.eval_point(a, h, t),
            Formula::Fut(_) | Formula::TruePred(_) => {
                Err(TemporalError::IllFormedFutBody(f.to_string()))
            }
            Formula::Forall(..) | Formula::Exists(..) => {
                Err(TemporalError::Quantified(f.to_string()))
            }
        }
    }
}

/// The three supervaluationist clauses for `Fut A` at moment `t`:
/// 1 if every history through `t` contains a strictly later point where A is
/// true; 0 if every history contains a later point where A is false; 1/2
/// otherwise. It is an error for both classical clauses to hold at once.
pub fn eval_fut(
    body: &Formula,
    frame: &BranchingFrame,
    t: &str,
) -> Result<TruthValue, TemporalError> {
    if body.contains_fut() || body.contains_true_pred() {
        return Err(TemporalError::IllFormedFutBody(body.to_string()));
    }
    let histories = frame.histories(t)?;
    let mut all_have_true = true;
    let mut all_have_false = true;
    let mut flipping: Vec<String> = Vec::new();
    for h in &histories {
        let mut has_true = false;
        let mut has_false = false;
        for later in h.later(t) {
            if frame.eval_point(body, h, later)? {
                has_true = true;
            } else {
                has_false = true;
            }
        }
        all_have_true &= has_true;
        all_have_false &= has_false;
        if has_true && has_false {
            flipping.push(h.label.clone());
        }
    }
    match (all_have_true, all_have_false) {
        (true, true) => Err(TemporalError::Conflict {
            body: body.to_string(),
            moment: t.to_string(),
            histories: flipping,
        }),
        (true, false) => Ok(One),
        (false, true) => Ok(Zero),
        (false, false) => Ok(Half),
    }
}

/// Evaluate a formula (possibly with `Fut` subformulas) at moment `t`,
/// combining the `Fut` verdicts with the strong Kleene (or Cooper)
/// connectives. Atoms outside `Fut` must take the same classical value on
/// every history through `t`.
pub fn eval_at(
    f: &Formula,
    frame: &BranchingFrame,
    t: &str,
    family: ConnectiveFamily,
) -> Result<TruthValue, TemporalError> {
    match f {
        Formula::Falsum => Ok(Zero),
        Formula::Fut(body) => eval_fut(body, frame, t),
        Formula::Atom(..) => {
            let key = f.to_string();
            let histories = frame.histories(t)?;
            let mut vals = BTreeSet::new();
            for h in &histories {
                vals.insert(frame.atom_at(h, t, &key)?);
            }
            match vals.len() {
                1 => Ok(if vals.contains(&true) { One } else { Zero }),
                _ => Ok(Half),
            }
        }
        Formula::Not(a) => Ok(eval_at(a, frame, t, family)?.neg()),
        Formula::And(a, b) => Ok(conj(
            eval_at(a, frame, t, family)?,
            eval_at(b, frame, t, family)?,
        )),
        Formula::Or(a, b) => Ok(disj(
            eval_at(a, frame, t, family)?,
            eval_at(b, frame, t, family)?,
        )),
        Formula::Cond(a, b) => Ok(family.cond(
            eval_at(a, frame, t, family)?,
            eval_at(b, frame, t, family)?,
        )),
        Formula::Bicond(a, b) => Ok(family.bicond(
            eval_at(a, frame, t, family)?,
            eval_at(b, frame, t, family)?,
        )),
        Formula::Simp(a) => Ok(bochvar_simp(eval_at(a, frame, t, family)?)),
        Formula::TruePred(_) => Err(TemporalError::IllFormedFutBody(f.to_string())),
        Formula::Forall(..) | Formula::Exists(..) => Err(TemporalError::Quantified(f.to_string())),
    }
}

/// Retrospective evaluation inside one chosen history: the supervaluation
/// quantifier collapses to Prior's clause, so `Fut A` is classically true at
/// (h, t) iff some later point of h makes A true. Always classical.
pub fn eval_at_in_history(
    f: &Formula,
    frame: &BranchingFrame,
    history: &str,
    t: &str,
) -> Result<TruthValue, TemporalError> {
    let h = frame.history(history)?;
    if !h.contains(t) {
        return Err(TemporalError::NoSuchMoment(t.to_string()));
    }
    fn go(
        f: &Formula,
        frame: &BranchingFrame,
        h: &History,
        t: &str,
    ) -> Result<bool, TemporalError> {
        match f {
            Formula::Fut(body) => {
                if body.contains_fut() || body.contains_true_pred() {
                    return Err(TemporalError::IllFormedFutBody(body.to_string()));
                }
                for later in h.later(t) {
                    if frame.eval_point(body, h, later)? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
            Formula::Falsum => Ok(false),
            Formula::Atom(..) => frame.atom_at(h, t, &f.to_string()),
            Formula::Not(a) => Ok(!go(a, frame, h, t)?),
            Formula::And(a, b) => Ok(go(a, frame, h, t)? && go(b, frame, h, t)?),
            Formula::Or(a, b) => Ok(go(a, frame, h, t)? || go(b, frame, h, t)?),
            Formula::Cond(a, b) => Ok(!go(a, frame, h, t)? || go(b, frame, h, t)?),
            Formula::Bicond(a, b) => Ok(go(a, frame, h, t)? == go(b, frame, h, t)?),
            Formula::Simp(a) => go(a, frame, h, t),
            Formula::TruePred(_) => Err(TemporalError::IllFormedFutBody(f.to_string())),
            Formula::Forall(..) | Formula::Exists(..) => {
                Err(TemporalError::Quantified(f.to_string()))
            }
        }
    }
    Ok(if go(f, frame, h, t)? { One } else { Zero })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse, QuotationContext};

    /// The two-branch frame: root t with branches t1 (punished) and
    /// t2 (spared).
    pub(crate) fn bridge_frame() -> BranchingFrame {
        BranchingFrame::from_json(
            r#"{
                "moments": ["t", "t1", "t2"],
                "edges": [["t", "t1"], ["t", "t2"]],
                "valuation": {
                    "h1@t1": {"Pun(a)": 1},
                    "h2@t2": {"Pun(a)": 0}
                }
            }"#,
        )
        .unwrap()
    }

    fn pun() -> Formula {
        parse("Pun(a)", &QuotationContext::new()).unwrap()
    }

    #[test]
    fn linear_chain_has_one_history() {
        let frame = BranchingFrame::from_json(
            r#"{"moments": ["t0", "t1", "t2"], "edges": [["t0","t1"],["t1","t2"]]}"#,
        )
        .unwrap();
        assert_eq!(frame.all_histories().len(), 1);
        assert_eq!(frame.histories("t1").unwrap().len(), 1);
    }

    #[test]
    fn two_branch_root_has_two_histories() {
        let frame = bridge_frame();
        assert_eq!(frame.histories("t").unwrap().len(), 2);
        assert_eq!(frame.histories("t1").unwrap().len(), 1);
        assert_eq!(frame.all_histories()[0].moments, vec!["t", "t1"]);
        assert_eq!(frame.all_histories()[1].moments, vec!["t", "t2"]);
    }

    #[test]
    fn fut_pun_is_half_at_root() {
        let frame = bridge_frame();
        assert_eq!(eval_fut(&pun(), &frame, "t"), Ok(Half));
    }

    #[test]
    fn lem_disjunction_is_half_at_root() {
        let frame = bridge_frame();
        let lem = parse("Fut Pun(a) | ~Fut Pun(a)", &QuotationContext::new()).unwrap();
        assert_eq!(
            eval_at(&lem, &frame, "t", ConnectiveFamily::StrongKleene),
            Ok(Half)
        );
    }

    #[test]
    fn single_history_frame_is_classical() {
        let frame = BranchingFrame::from_json(
            r#"{
                "moments": ["t0", "t1"],
                "edges": [["t0","t1"]],
                "valuation": {"h1@t1": {"Pun(a)": 1}}
            }"#,
        )
        .unwrap();
        assert_eq!(eval_fut(&pun(), &frame, "t0"), Ok(One));
    }

    #[test]
    fn retrospective_value_is_classical_in_each_history() {
        let frame = bridge_frame();
        let fut = parse("Fut Pun(a)", &QuotationContext::new()).unwrap();
        assert_eq!(eval_at_in_history(&fut, &frame, "h1", "t"), Ok(One));
        assert_eq!(eval_at_in_history(&fut, &frame, "h2", "t"), Ok(Zero));
    }

    #[test]
    fn conflict_when_body_flips_in_every_history() {
        let frame = BranchingFrame::from_json(
            r#"{
                "moments": ["t0", "t1", "t2"],
                "edges": [["t0","t1"],["t1","t2"]],
                "valuation": {
                    "h1@t1": {"Pun(a)": 1},
                    "h1@t2": {"Pun(a)": 0}
                }
            }"#,
        )
        .unwrap();
        let err = eval_fut(&pun(), &frame, "t0").unwrap_err();
        match err {
            TemporalError::Conflict { histories, .. } => {
                assert_eq!(histories, vec!["h1".to_string()])
            }
            other => panic!("expected conflict, got {other:?}"),
        }
    }

    #[test]
    fn nested_fut_is_rejected() {
        let frame = bridge_frame();
        let f = parse("Fut Fut Pun(a)", &QuotationContext::new()).unwrap();
        let body = match &f {
            Formula::Fut(b) => b.as_ref().clone(),
            _ => unreachable!(),
        };
        assert!(matches!(
            eval_fut(&body, &frame, "t"),
            Err(TemporalError::IllFormedFutBody(_))
        ));
    }

    #[test]
    fn frame_with_two_roots_is_rejected() {
        let err =
            BranchingFrame::from_json(r#"{"moments": ["t0", "t1"], "edges": []}"#).unwrap_err();
        assert!(matches!(err, TemporalError::RootCount(_)));
    }
}
