//! Instance text format, seeded instance generation, and plan rendering.
//!
//! Instance grammar (one directive per line, `#` starts a comment line):
//!
//! ```text
//! p ind-mst <n> <m>      header: vertex and edge counts
//! s <scale>              optional, power of ten; admits fixed-point weights
//! e <u> <v> <w> <flag>   m edge lines; 1-based endpoints, flag 1 = existing
//! ```
//!
//! Weights are stored as exact integers. Under `s 100`, the token `3.25`
//! loads as 325 and `4` as 400; emission always writes the scaled integer
//! form, so parse -> emit -> parse is the identity on the canonical form.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{validate_instance, Edge, Graph, UnionFind};
use crate::matroid::Weight;
use crate::solver::BuildPlan;

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Parses and validates an instance file.
pub fn parse_instance(text: &str) -> Result<Graph> {
    let mut header: Option<(usize, usize)> = None;
    let mut scale: i64 = 1;
    let mut scale_digits: usize = 0;
    let mut edges: Vec<Edge> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let lno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let tag = tokens.next().unwrap();
        match tag {
            "p" => {
                if header.is_some() {
                    return Err(parse_err(lno, "duplicate header"));
                }
                if tokens.next() != Some("ind-mst") {
                    return Err(parse_err(lno, "expected problem tag 'ind-mst'"));
                }
                let n: usize = next_number(&mut tokens, lno, "vertex count")?;
                let m: usize = next_number(&mut tokens, lno, "edge count")?;
                if n == 0 {
                    return Err(parse_err(lno, "vertex count must be positive"));
                }
                expect_end(&mut tokens, lno)?;
                header = Some((n, m));
            }
            "s" => {
                if header.is_none() {
                    return Err(parse_err(lno, "scale directive before header"));
                }
                if !edges.is_empty() {
                    return Err(parse_err(lno, "scale directive after edge lines"));
                }
                let s: i64 = next_number(&mut tokens, lno, "scale")?;
                expect_end(&mut tokens, lno)?;
                if s < 1 || !is_power_of_ten(s) {
                    return Err(parse_err(lno, format!("scale {s} is not a power of ten")));
                }
                scale = s;
                scale_digits = s.ilog10() as usize;
            }
            "e" => {
                let (n, m) = header.ok_or_else(|| parse_err(lno, "edge line before header"))?;
                if edges.len() == m {
                    return Err(parse_err(lno, format!("more than {m} edge lines")));
                }
                let u: usize = next_number(&mut tokens, lno, "endpoint")?;
                let v: usize = next_number(&mut tokens, lno, "endpoint")?;
                let w_tok = tokens
                    .next()
                    .ok_or_else(|| parse_err(lno, "missing weight"))?;
                let weight = parse_weight(w_tok, scale, scale_digits, lno)?;
                let flag: u8 = next_number(&mut tokens, lno, "existing flag")?;
                expect_end(&mut tokens, lno)?;
                if u < 1 || u > n || v < 1 || v > n {
                    return Err(parse_err(lno, format!("endpoint outside 1..={n}")));
                }
                if flag > 1 {
                    return Err(parse_err(lno, "existing flag must be 0 or 1"));
                }
                edges.push(Edge::new(u - 1, v - 1, weight, flag == 1));
            }
            other => {
                return Err(parse_err(lno, format!("unknown directive '{other}'")));
            }
        }
    }

    let (n, m) = header.ok_or_else(|| parse_err(1, "missing header"))?;
    if edges.len() != m {
        return Err(parse_err(
            text.lines().count().max(1),
            format!("expected {m} edge lines, found {}", edges.len()),
        ));
    }
    let g = Graph::new(n, edges).map_err(|e| parse_err(1, e.to_string()))?;
    validate_instance(&g)?;
    Ok(g)
}

fn next_number<T: std::str::FromStr>(
    tokens: &mut std::str::SplitWhitespace<'_>,
    lno: usize,
    what: &str,
) -> Result<T> {
    let tok = tokens
        .next()
        .ok_or_else(|| parse_err(lno, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| parse_err(lno, format!("bad {what} '{tok}'")))
}

fn expect_end(tokens: &mut std::str::SplitWhitespace<'_>, lno: usize) -> Result<()> {
    match tokens.next() {
        None => Ok(()),
        Some(extra) => Err(parse_err(lno, format!("unexpected token '{extra}'"))),
    }
}

fn is_power_of_ten(mut s: i64) -> bool {
    while s % 10 == 0 {
        s /= 10;
    }
    s == 1
}

fn parse_weight(tok: &str, scale: i64, scale_digits: usize, lno: usize) -> Result<Weight> {
    let (sign, body) = match tok.strip_prefix('-') {
        Some(rest) => (-1i64, rest),
        None => (1i64, tok),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int_part.is_empty() || !int_part.bytes().all(|b| b.is_ascii_digit()) {
        return Err(parse_err(lno, format!("bad weight '{tok}'")));
    }
    if !frac_part.is_empty() {
        if scale == 1 {
            return Err(parse_err(
                lno,
                format!("fractional weight '{tok}' without a scale directive"),
            ));
        }
        if frac_part.len() > scale_digits || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(parse_err(
                lno,
                format!("weight '{tok}' has more fractional digits than scale allows"),
            ));
        }
    }
    let int_val: i64 = int_part
        .parse()
        .map_err(|_| parse_err(lno, format!("weight '{tok}' out of range")))?;
    let mut frac_val: i64 = 0;
    if !frac_part.is_empty() {
        frac_val = frac_part.parse::<i64>().unwrap();
        for _ in 0..(scale_digits - frac_part.len()) {
            frac_val *= 10;
        }
    }
    int_val
        .checked_mul(scale)
        .and_then(|v| v.checked_add(frac_val))
        .map(|v| sign * v)
        .ok_or_else(|| parse_err(lno, format!("weight '{tok}' out of range")))
}

/// Renders a graph in canonical form: integer weights, no scale directive.
pub fn emit_instance(g: &Graph) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "p ind-mst {} {}\n",
        g.vertex_count(),
        g.edge_count()
    ));
    for e in g.edges() {
        out.push_str(&format!(
            "e {} {} {} {}\n",
            e.u + 1,
            e.v + 1,
            e.weight,
            e.existing as u8
        ));
    }
    out
}

/// Deterministic random instance: a connected multigraph on `n` vertices and
/// `m` edges with uniform weights in `weight_range`, whose existing edges
/// always contain a spanning tree and approach `e0_fraction` of all edges.
/// The same arguments always produce the same graph.
pub fn gen_random(
    n: usize,
    m: usize,
    seed: u64,
    weight_range: (Weight, Weight),
    e0_fraction: f64,
) -> Result<Graph> {
    let (lo, hi) = weight_range;
    if n == 0 {
        return Err(Error::InvalidParams("need at least one vertex".into()));
    }
    if m + 1 < n {
        return Err(Error::InvalidParams(format!(
            "{m} edges cannot connect {n} vertices"
        )));
    }
    if lo > hi {
        return Err(Error::InvalidParams(format!(
            "empty weight range {lo}..={hi}"
        )));
    }
    if !(0.0..=1.0).contains(&e0_fraction) || e0_fraction.is_nan() {
        return Err(Error::InvalidParams(format!(
            "existing fraction {e0_fraction} outside [0, 1]"
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs: Vec<(usize, usize)> = Vec::with_capacity(m);
    let mut verts: Vec<usize> = (0..n).collect();
    verts.shuffle(&mut rng);
    for i in 1..n {
        let u = verts[i];
        let v = verts[rng.gen_range(0..i)];
        pairs.push((u, v));
    }
    while pairs.len() < m {
        let u = rng.gen_range(0..n);
        let v = if n == 1 {
            u
        } else {
            loop {
                let v = rng.gen_range(0..n);
                if v != u {
                    break v;
                }
            }
        };
        pairs.push((u, v));
    }
    pairs.shuffle(&mut rng);

    let weights: Vec<Weight> = (0..m).map(|_| rng.gen_range(lo..=hi)).collect();

    // spanning tree first, then round out to the requested share
    let target = ((m as f64 * e0_fraction).round() as usize).clamp(n - 1, m);
    let mut existing = vec![false; m];
    let mut uf = UnionFind::new(n);
    let mut count = 0;
    for (i, &(u, v)) in pairs.iter().enumerate() {
        if u != v && uf.union(u, v) {
            existing[i] = true;
            count += 1;
        }
    }
    if count < target {
        let mut rest: Vec<usize> = (0..m).filter(|&i| !existing[i]).collect();
        rest.shuffle(&mut rng);
        for i in rest.into_iter().take(target - count) {
            existing[i] = true;
        }
    }

    let edges: Vec<Edge> = pairs
        .into_iter()
        .zip(weights)
        .zip(existing)
        .map(|(((u, v), w), x)| Edge::new(u, v, w, x))
        .collect();
    Graph::new(n, edges)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Tsv,
}

impl std::str::FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "tsv" => Ok(OutputFormat::Tsv),
            other => Err(format!("unknown output format '{other}' (json|tsv)")),
        }
    }
}

/// Renders a plan as a JSON document or a TSV table. When the source graph
/// is supplied, the JSON form also spells the build order out as 1-based
/// vertex pairs.
pub fn emit_plan(
    plan: &BuildPlan,
    algorithm: &str,
    format: OutputFormat,
    graph: Option<&Graph>,
) -> String {
    match format {
        OutputFormat::Json => {
            let mut doc = serde_json::json!({
                "algorithm": algorithm,
                "horizon": plan.horizon,
                "order": plan.order(),
                "step_weights": plan.step_weights,
                "ultimate_weight": plan.ultimate_weight,
                "objective": plan.objective,
                "exchanges": plan
                    .exchanges
                    .iter()
                    .map(|p| {
                        serde_json::json!({
                            "removed": p.removed,
                            "added": p.added,
                            "gain": p.gain,
                        })
                    })
                    .collect::<Vec<_>>(),
            });
            if let Some(g) = graph {
                let order_edges: Vec<serde_json::Value> = plan
                    .order()
                    .into_iter()
                    .map(|e| {
                        let edge = g.edge(e);
                        serde_json::json!([edge.u + 1, edge.v + 1])
                    })
                    .collect();
                doc["order_edges"] = serde_json::Value::Array(order_edges);
            }
            let mut text = serde_json::to_string_pretty(&doc).expect("plain tree serializes");
            text.push('\n');
            text
        }
        OutputFormat::Tsv => {
            let mut out = String::new();
            out.push_str(&format!("algorithm\t{algorithm}\n"));
            out.push_str(&format!("horizon\t{}\n", plan.horizon));
            out.push_str(&format!("ultimate_weight\t{}\n", plan.ultimate_weight));
            out.push_str(&format!("objective\t{}\n", plan.objective));
            out.push_str("step\tadded\tremoved\tgain\tweight\n");
            out.push_str(&format!("0\t-\t-\t-\t{}\n", plan.step_weights[0]));
            for (i, pair) in plan.exchanges.iter().enumerate() {
                out.push_str(&format!(
                    "{}\t{}\t{}\t{}\t{}\n",
                    i + 1,
                    pair.added,
                    pair.removed,
                    pair.gain,
                    plan.step_weights[i + 1]
                ));
            }
            out
        }
    }
}
