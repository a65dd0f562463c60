//! Reading grid functions from CSV: a header row, coordinate columns
//! (`x` or `x1`, `x2`) and one value column (`u`, `value`, or the last one).

use std::path::Path;

use supremal_core::GridDomain;

use crate::ScenarioError;

fn bad(path: &Path, msg: impl std::fmt::Display) -> ScenarioError {
    ScenarioError::Invalid(format!("{}: {msg}", path.display()))
}

pub fn read_field(path: &Path, dom: &GridDomain) -> Result<Vec<f64>, ScenarioError> {
    let text = std::fs::read_to_string(path).map_err(|e| ScenarioError::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    parse_field(&text, dom).map_err(|m| bad(path, m))
}

pub fn parse_field(text: &str, dom: &GridDomain) -> Result<Vec<f64>, String> {
    let mut r = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header: Vec<String> = r
        .headers()
        .map_err(|e| e.to_string())?
        .iter()
        .map(str::to_string)
        .collect();
    let col = |names: &[&str]| header.iter().position(|h| names.contains(&h.as_str()));
    let coords: Vec<usize> = if dom.dim() == 1 {
        vec![col(&["x", "x1"]).ok_or("missing column x")?]
    } else {
        vec![
            col(&["x1", "x"]).ok_or("missing column x1")?,
            col(&["x2", "y"]).ok_or("missing column x2")?,
        ]
    };
    let value = col(&["u", "value"]).unwrap_or(header.len().saturating_sub(1));
    if coords.contains(&value) {
        return Err("no value column".into());
    }
    let mut values = vec![0.0; dom.node_count()];
    let mut seen = vec![false; dom.node_count()];
    for (k, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| e.to_string())?;
        let line = k + 2;
        let get = |c: usize| -> Result<f64, String> {
            let s = rec
                .get(c)
                .ok_or(format!("line {line}: missing column {}", header[c]))?;
            s.parse::<f64>()
                .map_err(|_| format!("line {line}: `{s}` is not a number"))
        };
        let mut p = [0.0; 2];
        for (ax, &c) in coords.iter().enumerate() {
            p[ax] = get(c)?;
        }
        let node = dom
            .nearest_node(p)
            .ok_or(format!("line {line}: {p:?} is outside the domain"))?;
        let q = dom.coords(node);
        if (q[0] - p[0]).hypot(q[1] - p[1]) > 0.25 * dom.h() {
            return Err(format!("line {line}: {p:?} is not a grid node"));
        }
        if seen[node] {
            return Err(format!("line {line}: node {q:?} given twice"));
        }
        seen[node] = true;
        values[node] = get(value)?;
    }
    if let Some(n) = dom.nodes().find(|&n| !seen[n]) {
        return Err(format!("no value for node {:?}", dom.coords(n)));
    }
    Ok(values)
}
