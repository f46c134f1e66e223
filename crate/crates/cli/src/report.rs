//! Reports: one value rendered either as aligned text or as JSON.

use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct RingInfo {
    pub variables: Vec<String>,
    pub weights: Vec<i64>,
    pub f: String,
    pub degree: i64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CurveInfo {
    pub generators: Vec<u64>,
    pub lambda_complement: Vec<u64>,
    pub c: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Table {
    pub title: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(title: &str, columns: &[&str]) -> Self {
        Table { title: title.into(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn row(&mut self, cells: Vec<String>) {
        assert_eq!(cells.len(), self.columns.len());
        self.rows.push(cells);
    }

    /// A two-column table of named values.
    pub fn summary(pairs: Vec<(&str, String)>) -> Self {
        let mut t = Table::new("summary", &["quantity", "value"]);
        for (k, v) in pairs {
            t.row(vec![k.to_string(), v]);
        }
        t
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Assertion {
    pub name: String,
    /// The statement being checked, with its hypothesis.
    pub statement: String,
    pub passed: bool,
    pub detail: String,
}

/// One polynomial of a representative: a cochain value or a matrix entry.
#[derive(Debug, Clone, Serialize)]
pub struct Representative {
    pub label: String,
    pub at: String,
    pub value: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ring: Option<RingInfo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub curve: Option<CurveInfo>,
    pub tables: Vec<Table>,
    pub assertions: Vec<Assertion>,
    pub representatives: Vec<Representative>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.into(),
            ring: None,
            curve: None,
            tables: Vec::new(),
            assertions: Vec::new(),
            representatives: Vec::new(),
        }
    }

    pub fn assert(&mut self, statement: &str, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.assertions.push(Assertion { name: name.into(), statement: statement.into(), passed, detail: detail.into() });
    }

    pub fn checks(&mut self, statement: &str, checks: Vec<lrcoh::Check>) {
        for c in checks {
            self.assert(statement, c.name, c.passed, c.detail);
        }
    }

    pub fn represent(&mut self, label: impl Into<String>, at: impl Into<String>, value: String) {
        self.representatives.push(Representative { label: label.into(), at: at.into(), value });
    }

    pub fn all_passed(&self) -> bool {
        self.assertions.iter().all(|a| a.passed)
    }

    pub fn exit_code(&self) -> i32 {
        if self.all_passed() {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("command: {}\n", self.command);
        if let Some(r) = &self.ring {
            out.push_str(&format!(
                "ring: Q[{}]/({}), weights ({}), degree {}\n",
                r.variables.join(", "),
                r.f,
                r.weights.iter().map(|w| w.to_string()).collect::<Vec<_>>().join(", "),
                r.degree
            ));
        }
        if let Some(c) = &self.curve {
            let list = |v: &[u64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
            out.push_str(&format!(
                "curve: Gamma = <{}>, N0 \\ Lambda = {{{}}}, c = {}\n",
                list(&c.generators),
                list(&c.lambda_complement),
                c.c.as_deref().unwrap_or("-")
            ));
        }
        for t in &self.tables {
            out.push_str(&format!("\n{}:\n", t.title));
            let mut widths: Vec<usize> = t.columns.iter().map(|c| c.len()).collect();
            for row in &t.rows {
                for (w, cell) in widths.iter_mut().zip(row) {
                    *w = (*w).max(cell.len());
                }
            }
            let line = |cells: &[String]| {
                let parts: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect();
                format!("  {}\n", parts.join("  ").trim_end())
            };
            out.push_str(&line(&t.columns));
            for row in &t.rows {
                out.push_str(&line(row));
            }
        }
        if !self.assertions.is_empty() {
            out.push_str("\nassertions:\n");
            let mut last = "";
            for a in &self.assertions {
                if a.statement != last {
                    out.push_str(&format!("  claim: {}\n", a.statement));
                    last = &a.statement;
                }
                let tag = if a.passed { "PASS" } else { "FAIL" };
                if a.detail.is_empty() {
                    out.push_str(&format!("    [{tag}] {}\n", a.name));
                } else {
                    out.push_str(&format!("    [{tag}] {} ({})\n", a.name, a.detail));
                }
            }
        }
        if !self.representatives.is_empty() {
            out.push_str("\nrepresentatives:\n");
            for r in &self.representatives {
                out.push_str(&format!("  {} {}: {}\n", r.label, r.at, r.value));
            }
        }
        let failed = self.assertions.iter().filter(|a| !a.passed).count();
        out.push_str(&format!("\nresult: {} of {} assertions passed\n", self.assertions.len() - failed, self.assertions.len()));
        out
    }
}
