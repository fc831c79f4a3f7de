use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Graph6,
    Table,
}

/// What a subcommand produced. `graphs` are graph6 lines; in graph6 mode
/// they are printed after `json` when `header` is set, and instead of it
/// otherwise.
pub struct Output {
    pub json: Value,
    pub graphs: Vec<String>,
    pub header: bool,
    pub default_format: Format,
}

impl Output {
    pub fn json(json: Value) -> Self {
        Output {
            json,
            graphs: Vec::new(),
            header: false,
            default_format: Format::Json,
        }
    }

    pub fn graphs(json: Value, graphs: Vec<String>) -> Self {
        Output {
            json,
            graphs,
            header: false,
            default_format: Format::Graph6,
        }
    }

    pub fn with_header(mut self) -> Self {
        self.header = true;
        self
    }

    pub fn render(&self, format: Option<Format>) -> String {
        let mut out = String::new();
        match format.unwrap_or(self.default_format) {
            Format::Json => {
                out.push_str(&self.json.to_string());
                out.push('\n');
            }
            Format::Graph6 => {
                if self.header || self.graphs.is_empty() {
                    out.push_str(&self.json.to_string());
                    out.push('\n');
                }
                for g in &self.graphs {
                    out.push_str(g);
                    out.push('\n');
                }
            }
            Format::Table => table(&self.json, &mut out),
        }
        out
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

fn table(v: &Value, out: &mut String) {
    match v {
        Value::Object(map) => {
            let rows = map.values().find_map(|x| match x {
                Value::Array(a) if !a.is_empty() && a.iter().all(Value::is_object) => Some(a),
                _ => None,
            });
            for (k, x) in map {
                if rows.is_some_and(|r| Some(r) == x.as_array()) {
                    continue;
                }
                out.push_str(&format!("{k}\t{}\n", cell(x)));
            }
            if let Some(rows) = rows {
                rows_table(rows, out);
            }
        }
        Value::Array(rows) if rows.iter().all(Value::is_object) => rows_table(rows, out),
        other => {
            out.push_str(&cell(other));
            out.push('\n');
        }
    }
}

fn rows_table(rows: &[Value], out: &mut String) {
    let mut columns: Vec<&String> = Vec::new();
    for r in rows {
        for k in r.as_object().expect("object rows").keys() {
            if !columns.contains(&k) {
                columns.push(k);
            }
        }
    }
    let header: Vec<&str> = columns.iter().map(|c| c.as_str()).collect();
    out.push_str(&header.join("\t"));
    out.push('\n');
    for r in rows {
        let line: Vec<String> = columns
            .iter()
            .map(|c| cell(r.get(c.as_str()).unwrap_or(&Value::Null)))
            .collect();
        out.push_str(&line.join("\t"));
        out.push('\n');
    }
}
