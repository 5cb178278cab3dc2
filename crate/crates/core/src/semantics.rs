//! Model checking: pointed satisfaction, satisfaction relative to an agent's
//! local states, and validity over the whole model.

use std::collections::HashMap;

use crate::formula::Formula;
use crate::ids::{AgentId, StateId};
use crate::kripke::{KripkeModel, ModelError};

/// True iff `agent` has at least one edge leaving `state`. Agents that are
/// not part of the model are absent everywhere.
pub fn presence_at(
    model: &KripkeModel,
    agent: &AgentId,
    state: &StateId,
) -> Result<bool, ModelError> {
    model.require_state(state)?;
    Ok(!model.successor_set(agent, state).is_empty())
}

/// Every proposition must be declared, as must the agent of each `B[i]` and
/// the left index of `C[i,j]`/`P[i,j]`. The right index is free.
pub fn check_symbols(model: &KripkeModel, f: &Formula) -> Result<(), ModelError> {
    match f {
        Formula::Prop(p) => match model.valuation(p) {
            Some(_) => Ok(()),
            None => Err(ModelError::UnknownProp(p.clone())),
        },
        Formula::Not(a) => check_symbols(model, a),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            check_symbols(model, a)?;
            check_symbols(model, b)
        }
        Formula::Believes(i, a) => {
            model.require_agent(i)?;
            check_symbols(model, a)
        }
        Formula::CertainAgent(i, _) | Formula::PossibleAgent(i, _) => model.require_agent(i),
    }
}

/// Memoizing evaluator over one model.
///
/// Entries are keyed on subformula address; formulas are borrowed for the
/// context's lifetime so an address cannot be reused while it is alive.
pub struct EvalContext<'m> {
    model: &'m KripkeModel,
    memo: HashMap<(*const Formula, &'m StateId), bool>,
}

impl<'m> EvalContext<'m> {
    pub fn new(model: &'m KripkeModel) -> Self {
        Self {
            model,
            memo: HashMap::new(),
        }
    }

    pub fn model(&self) -> &'m KripkeModel {
        self.model
    }

    pub fn holds_at(&mut self, state: &StateId, f: &'m Formula) -> Result<bool, ModelError> {
        check_symbols(self.model, f)?;
        let state = self
            .model
            .states()
            .get(state)
            .ok_or_else(|| ModelError::UnknownState(state.clone()))?;
        Ok(self.eval(state, f))
    }

    fn eval(&mut self, state: &'m StateId, f: &'m Formula) -> bool {
        let key = (f as *const Formula, state);
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let model = self.model;
        let v = match f {
            Formula::Prop(p) => model.valuation(p).is_some_and(|set| set.contains(state)),
            Formula::Not(a) => !self.eval(state, a),
            Formula::And(a, b) => self.eval(state, a) && self.eval(state, b),
            Formula::Or(a, b) => self.eval(state, a) || self.eval(state, b),
            Formula::Implies(a, b) => !self.eval(state, a) || self.eval(state, b),
            Formula::Believes(i, a) => model
                .successor_set(i, state)
                .iter()
                .all(|t| self.eval(t, a)),
            Formula::CertainAgent(i, j) => model
                .successor_set(i, state)
                .iter()
                .all(|t| !model.successor_set(j, t).is_empty()),
            Formula::PossibleAgent(i, j) => model
                .successor_set(i, state)
                .iter()
                .any(|t| !model.successor_set(j, t).is_empty()),
        };
        self.memo.insert(key, v);
        v
    }
}

/// `(M, state) ⊨ f`.
pub fn holds_at(model: &KripkeModel, state: &StateId, f: &Formula) -> Result<bool, ModelError> {
    EvalContext::new(model).holds_at(state, f)
}

/// `f` holds at every local state of `agent`.
pub fn holds_for_agent(
    model: &KripkeModel,
    agent: &AgentId,
    f: &Formula,
) -> Result<bool, ModelError> {
    model.require_agent(agent)?;
    check_symbols(model, f)?;
    let mut ctx = EvalContext::new(model);
    let locals = model.locals(agent).expect("declared agent has locals");
    Ok(locals.iter().all(|s| ctx.eval(s, f)))
}

/// `f` holds at every state of the model.
pub fn holds_globally(model: &KripkeModel, f: &Formula) -> Result<bool, ModelError> {
    check_symbols(model, f)?;
    let mut ctx = EvalContext::new(model);
    Ok(model.states().iter().all(|s| ctx.eval(s, f)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::kripke::fixtures::figure2;

    fn st(s: &str) -> StateId {
        s.parse().unwrap()
    }

    fn ag(s: &str) -> AgentId {
        AgentId::new(s).unwrap()
    }

    fn at(m: &KripkeModel, s: &str, f: &str) -> bool {
        holds_at(m, &st(s), &parse(f).unwrap()).unwrap()
    }

    fn for_agent(m: &KripkeModel, a: &str, f: &str) -> bool {
        holds_for_agent(m, &ag(a), &parse(f).unwrap()).unwrap()
    }

    #[test]
    fn presence_on_figure2() {
        let m = figure2();
        assert!(presence_at(&m, &ag("g"), &st("3")).unwrap());
        assert!(!presence_at(&m, &ag("g"), &st("1")).unwrap());
        assert!(!presence_at(&m, &ag("zed"), &st("3")).unwrap());
        assert!(presence_at(&m, &ag("g"), &st("7")).is_err());
    }

    #[test]
    fn pointed_satisfaction_on_figure2() {
        let m = figure2();
        assert!(at(&m, "3", "B[f] C[m,g]"));
        assert!(!at(&m, "1", "B[m] p"));
        assert!(at(&m, "1", "~B[m] p"));
        assert!(at(&m, "1", "B[m] B[f] p"));
    }

    #[test]
    fn vacuous_box_and_empty_diamond() {
        let m = KripkeModel::builder()
            .states(["s"])
            .agent("i", Vec::<(&str, &str)>::new(), ["s"])
            .build()
            .unwrap();
        assert!(at(&m, "s", "C[i,j]"));
        assert!(!at(&m, "s", "P[i,j]"));
        assert!(at(&m, "s", "B[i] C[i,i]"));
    }

    #[test]
    fn agent_relative_satisfaction_on_figure2() {
        let m = figure2();
        assert!(for_agent(&m, "m", "~P[m,g]"));
        assert!(for_agent(&m, "f", "B[f] B[g] p"));
        assert!(for_agent(&m, "m", "B[m] B[f] C[f,g]"));
        assert!(!for_agent(&m, "m", "p"));
    }

    #[test]
    fn global_satisfaction_on_figure2() {
        let m = figure2();
        let g = |f: &str| holds_globally(&m, &parse(f).unwrap()).unwrap();
        assert!(g("p | ~p"));
        assert!(!g("p"));
        assert!(g("C[f,g]"));
        assert!(!g("C[m,g]"));
    }

    #[test]
    fn symbol_errors() {
        let m = figure2();
        let f = |s: &str| parse(s).unwrap();
        assert!(matches!(
            holds_at(&m, &st("1"), &f("q")),
            Err(ModelError::UnknownProp(_))
        ));
        assert_eq!(
            holds_at(&m, &st("1"), &f("B[x] p")),
            Err(ModelError::UnknownAgent(ag("x")))
        );
        assert_eq!(
            holds_at(&m, &st("1"), &f("C[x,m]")),
            Err(ModelError::UnknownAgent(ag("x")))
        );
        assert_eq!(holds_at(&m, &st("1"), &f("C[m,x]")), Ok(false));
        assert_eq!(holds_at(&m, &st("1"), &f("~P[m,x]")), Ok(true));
        assert_eq!(
            holds_at(&m, &st("4"), &f("p")),
            Err(ModelError::UnknownState(st("4")))
        );
        assert_eq!(
            holds_for_agent(&m, &ag("x"), &f("p")),
            Err(ModelError::UnknownAgent(ag("x")))
        );
    }

    #[test]
    fn shared_context_reuses_memo() {
        let m = figure2();
        let f = parse("B[m] B[f] (p & C[f,g])").unwrap();
        let mut ctx = EvalContext::new(&m);
        let first: Vec<bool> = m
            .states()
            .iter()
            .map(|s| ctx.holds_at(s, &f).unwrap())
            .collect();
        let second: Vec<bool> = m
            .states()
            .iter()
            .map(|s| ctx.holds_at(s, &f).unwrap())
            .collect();
        assert_eq!(first, second);
        assert_eq!(first, vec![true, true, true]);
    }
}
