use serde::{Deserialize, Serialize};

/// One named axiom and its residual.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxiomCheck {
    pub name: String,
    pub residual: f64,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub tol: f64,
    pub checks: Vec<AxiomCheck>,
}

impl ValidationReport {
    pub fn new(tol: f64) -> Self {
        ValidationReport { tol, checks: vec![] }
    }

    pub fn push(&mut self, name: &str, residual: f64) {
        self.checks.push(AxiomCheck {
            name: name.to_string(),
            residual,
            passed: residual <= self.tol,
            note: None,
        });
    }

    pub fn push_note(&mut self, name: &str, residual: f64, note: &str) {
        self.push(name, residual);
        self.checks.last_mut().unwrap().note = Some(note.to_string());
    }

    /// Records a check that cannot be evaluated, counted as failed.
    pub fn push_failure(&mut self, name: &str, note: &str) {
        self.checks.push(AxiomCheck {
            name: name.to_string(),
            residual: f64::INFINITY,
            passed: false,
            note: Some(note.to_string()),
        });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failed(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect()
    }

    pub fn get(&self, name: &str) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}
