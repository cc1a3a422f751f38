use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Outcome {
    Sat,
    Unsat,
    Error,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Sat => 0,
            Outcome::Unsat => 1,
            Outcome::Error => 2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundRecord {
    pub s: Option<u32>,
    pub q: Option<u32>,
    #[serde(rename = "B")]
    pub b: u32,
}

/// Result of `check`, one per input file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub input: String,
    pub result: Outcome,
    pub bound: Option<BoundRecord>,
    pub diamonds: Option<usize>,
    pub p: Option<String>,
    pub certificate: Option<String>,
    pub error: Option<String>,
    pub elapsed_ms: f64,
}

impl ResultRecord {
    pub fn error(input: &str, msg: String, elapsed_ms: f64) -> ResultRecord {
        ResultRecord {
            input: input.to_string(),
            result: Outcome::Error,
            bound: None,
            diamonds: None,
            p: None,
            certificate: None,
            error: Some(msg),
            elapsed_ms,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("record serializes")
    }

    pub fn from_json(s: &str) -> serde_json::Result<ResultRecord> {
        serde_json::from_str(s)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("result: {}\ninput: {}\n", self.result_word(), self.input);
        if let Some(d) = self.diamonds {
            s += &format!("diamonds: {d}\n");
        }
        if let Some(p) = &self.p {
            s += &format!("p: {p}\n");
        }
        if let Some(b) = &self.bound {
            match (b.s, b.q) {
                (Some(sv), Some(q)) => s += &format!("bound: s={sv} q={q} B={}\n", b.b),
                _ => s += &format!("bound: B={} (given)\n", b.b),
            }
        }
        if let Some(c) = &self.certificate {
            s += &format!("certificate: {c}\n");
        }
        if let Some(e) = &self.error {
            s += &format!("error: {e}\n");
        }
        s += &format!("time: {:.1} ms\n", self.elapsed_ms);
        s
    }

    fn result_word(&self) -> &'static str {
        match self.result {
            Outcome::Sat => "SAT",
            Outcome::Unsat => "UNSAT",
            Outcome::Error => "ERROR",
        }
    }
}
