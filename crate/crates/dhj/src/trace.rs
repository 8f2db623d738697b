//! Structured records of procedure runs.
//!
//! Every engine procedure emits a `ProcedureTrace`: the exact parameters
//! it ran with (tagged toy or derived), one step per round with the
//! chosen object and the exact quantities that drove the choice, and the
//! outcome tag. Traces serialize into the JSON report schema, and every
//! recorded density is recomputable from the recorded choices.

use crate::ratio::{fmt_q, Q};
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct TraceStep {
    pub round: u64,
    pub action: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chosen: Option<String>,
    /// Named exact quantities, rendered "p/q".
    pub quantities: Vec<(String, String)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProcedureTrace {
    pub procedure: String,
    /// Exact parameters echoed as "name = p/q" pairs.
    pub parameters: Vec<(String, String)>,
    /// True when any parameter was a toy override rather than derived.
    pub toy: bool,
    pub steps: Vec<TraceStep>,
    /// Traces of the procedures this one invoked.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<ProcedureTrace>,
    pub outcome: String,
}

impl ProcedureTrace {
    pub fn new(procedure: &str, toy: bool) -> Self {
        ProcedureTrace {
            procedure: procedure.to_string(),
            parameters: Vec::new(),
            toy,
            steps: Vec::new(),
            children: Vec::new(),
            outcome: String::new(),
        }
    }

    pub fn param(&mut self, name: &str, value: &Q) {
        self.parameters.push((name.to_string(), fmt_q(value)));
    }

    pub fn param_int(&mut self, name: &str, value: u64) {
        self.parameters.push((name.to_string(), value.to_string()));
    }

    pub fn param_str(&mut self, name: &str, value: impl Into<String>) {
        self.parameters.push((name.to_string(), value.into()));
    }

    pub fn step(&mut self, round: u64, action: &str, chosen: Option<String>) -> &mut TraceStep {
        self.steps.push(TraceStep {
            round,
            action: action.to_string(),
            chosen,
            quantities: Vec::new(),
        });
        self.steps.last_mut().expect("just pushed")
    }

    pub fn finish(&mut self, outcome: impl Into<String>) {
        self.outcome = outcome.into();
    }
}

impl TraceStep {
    pub fn quantity(&mut self, name: &str, value: &Q) -> &mut Self {
        self.quantities.push((name.to_string(), fmt_q(value)));
        self
    }

    pub fn quantity_str(&mut self, name: &str, value: impl Into<String>) -> &mut Self {
        self.quantities.push((name.to_string(), value.into()));
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::q;

    #[test]
    fn traces_serialize() {
        let mut t = ProcedureTrace::new("uniformize", false);
        t.param("eps", &q(1, 2));
        t.step(1, "advance", Some("11".into())).quantity("slice_density", &q(3, 4));
        t.finish("success");
        let json = serde_json::to_string(&t).unwrap();
        assert!(json.contains("\"uniformize\""));
        assert!(json.contains("3/4"));
    }
}
