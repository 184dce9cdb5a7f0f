use serde_json::{json, Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skip,
    Warn,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skip => "skip",
            Status::Warn => "warn",
        }
    }

    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub details: String,
}

/// Command output. Serialized through `serde_json::Value`, whose maps keep
/// keys sorted, so identical runs give identical bytes.
#[derive(Debug)]
pub struct Report {
    pub command: String,
    pub params: Map<String, Value>,
    pub checks: Vec<Check>,
    pub results: Value,
    pub seed: u64,
}

impl Report {
    pub fn new(command: &str, seed: u64) -> Self {
        Report { command: command.into(), params: Map::new(), checks: Vec::new(), results: json!({}), seed }
    }

    pub fn param(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.params.insert(key.into(), value.into());
        self
    }

    pub fn check(&mut self, name: impl Into<String>, status: Status, details: impl Into<String>) -> &mut Self {
        self.checks.push(Check { name: name.into(), status, details: details.into() });
        self
    }

    pub fn failed(&self) -> bool {
        self.checks.iter().any(|c| c.status == Status::Fail)
    }

    pub fn to_json(&self) -> Value {
        let mut checks = self.checks.clone();
        checks.sort_by(|a, b| a.name.cmp(&b.name));
        let checks: Vec<Value> = checks
            .iter()
            .map(|c| json!({"name": c.name, "status": c.status.as_str(), "details": c.details}))
            .collect();
        json!({
            "command": self.command,
            "params": self.params,
            "checks": checks,
            "results": self.results,
            "seed": self.seed,
            "version": env!("CARGO_PKG_VERSION"),
            "status": if self.failed() { "fail" } else { "pass" },
        })
    }

    pub fn render_pretty(&self) -> String {
        let v = self.to_json();
        let mut out = format!("{} [{}]\n", self.command, v["status"].as_str().unwrap_or(""));
        for (k, val) in &self.params {
            out.push_str(&format!("  {k} = {}\n", plain(val)));
        }
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        for c in v["checks"].as_array().into_iter().flatten() {
            let name = c["name"].as_str().unwrap_or("");
            out.push_str(&format!(
                "  {:<5} {name:<width$}  {}\n",
                c["status"].as_str().unwrap_or("").to_uppercase(),
                c["details"].as_str().unwrap_or("")
            ));
        }
        if let Value::Object(results) = &self.results {
            for (k, val) in results {
                out.push_str(&format!("  {k}: {}\n", plain(val)));
            }
        }
        out
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_follows_checks() {
        let mut r = Report::new("x", 1);
        r.check("b", Status::Pass, "").check("a", Status::Warn, "");
        assert!(!r.failed());
        let v = r.to_json();
        assert_eq!(v["status"], "pass");
        assert_eq!(v["checks"][0]["name"], "a");
        r.check("c", Status::Fail, "boom");
        assert_eq!(r.to_json()["status"], "fail");
        assert!(r.render_pretty().contains("FAIL"));
    }

    #[test]
    fn keys_are_sorted() {
        let mut r = Report::new("x", 1);
        r.param("zeta", 1).param("alpha", 2);
        let text = serde_json::to_string(&r.to_json()).unwrap();
        assert!(text.find("alpha").unwrap() < text.find("zeta").unwrap());
        assert!(text.find("\"checks\"").unwrap() < text.find("\"command\"").unwrap());
    }
}
