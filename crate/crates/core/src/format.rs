//! Text formats for temporal graphs, schedules and divisions.
//!
//! Graph files:
//!
//! ```text
//! tempex v1
//! # spec family=s-connected n=4 ...
//! n 4 T 2
//! underlying 3
//! 0 1
//! 1 2
//! 2 3
//! snapshot 1 1
//! 0 1
//! snapshot 2 2
//! 1 2
//! 2 3
//! anchors 1
//! 0
//! ```
//!
//! `n N T T default-empty` lets snapshot sections be omitted (they are then
//! edgeless). An `oracle <policy> seed <seed>` line replaces all snapshot
//! sections for generated graphs. Blank lines and `#` comments are ignored,
//! except that a `# spec` comment carries the generator record.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use crate::error::{FormatError, ParseError, ParseErrorKind};
use crate::gen::{GeneratorSpec, SnapshotPolicy};
use crate::graph::{AnchorSet, Backing, Edge, StaticGraph, Temporal, TemporalGraph, Time, Vertex};
use crate::reductions::{DivisionComponent, RBDivision};
use crate::walk::{ExplorationSchedule, Step, TemporalWalk};

/// A parsed graph file.
#[derive(Clone, Debug)]
pub struct GraphFile {
    pub graph: TemporalGraph,
    pub anchors: Option<AnchorSet>,
    pub spec: Option<GeneratorSpec>,
}

struct Lines<'a> {
    inner: std::iter::Peekable<std::vec::IntoIter<(usize, &'a str)>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let lines: Vec<(usize, &str)> = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
            .collect();
        Lines {
            inner: lines.into_iter().peekable(),
            last: 0,
        }
    }

    fn next(&mut self, what: &'static str) -> Result<(usize, &'a str), ParseError> {
        match self.inner.next() {
            Some(l) => {
                self.last = l.0;
                Ok(l)
            }
            None => Err(ParseError::new(self.last + 1, ParseErrorKind::UnexpectedEof(what))),
        }
    }

    fn peek(&mut self) -> Option<&(usize, &'a str)> {
        self.inner.peek()
    }
}

fn malformed(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError::new(line, ParseErrorKind::Malformed(msg.into()))
}

fn num<T: FromStr>(line: usize, tok: &str) -> Result<T, ParseError> {
    tok.parse()
        .map_err(|_| malformed(line, format!("expected a number, found {tok:?}")))
}

/// Parses `keyword value` pairs in fixed order, e.g. `n 4 T 2`.
fn keyed<'a>(line: usize, text: &'a str, keys: &[&str]) -> Result<Vec<&'a str>, ParseError> {
    let toks: Vec<&str> = text.split_whitespace().collect();
    if toks.len() < 2 * keys.len() {
        return Err(malformed(line, format!("expected {}", keys.join(" ... "))));
    }
    let mut out = Vec::new();
    for (i, k) in keys.iter().enumerate() {
        if toks[2 * i] != *k {
            return Err(malformed(line, format!("expected {k:?}, found {:?}", toks[2 * i])));
        }
        out.push(toks[2 * i + 1]);
    }
    out.extend(&toks[2 * keys.len()..]);
    Ok(out)
}

fn edge_line(line: usize, text: &str) -> Result<(Vertex, Vertex), ParseError> {
    let toks: Vec<&str> = text.split_whitespace().collect();
    if toks.len() != 2 {
        return Err(malformed(line, format!("expected an edge, found {text:?}")));
    }
    Ok((num(line, toks[0])?, num(line, toks[1])?))
}

fn edges_block(lines: &mut Lines, n: usize, count: usize) -> Result<StaticGraph, ParseError> {
    let mut edges = Vec::with_capacity(count);
    let mut first = lines.last + 1;
    for i in 0..count {
        let (ln, text) = lines.next("edge")?;
        if i == 0 {
            first = ln;
        }
        edges.push((ln, edge_line(ln, text)?));
    }
    StaticGraph::new(n, edges.iter().map(|e| e.1)).map_err(|e| {
        // report the offending line when it can be identified
        let ln = match &e {
            crate::GraphError::SelfLoop(v) => edges.iter().find(|x| x.1 == (*v, *v)).map(|x| x.0),
            crate::GraphError::VertexOutOfRange { vertex, .. } => edges
                .iter()
                .find(|x| x.1 .0 == *vertex || x.1 .1 == *vertex)
                .map(|x| x.0),
            crate::GraphError::DuplicateEdge(a, b) => edges
                .iter()
                .filter(|x| Edge::from(x.1) == Edge::new(*a, *b))
                .nth(1)
                .map(|x| x.0),
            _ => None,
        };
        ParseError::new(ln.unwrap_or(first), ParseErrorKind::Graph(e))
    })
}

fn spec_comment(text: &str) -> Option<GeneratorSpec> {
    text.lines()
        .filter_map(|l| l.trim().strip_prefix("# spec "))
        .find_map(|s| s.parse().ok())
}

pub fn parse_graph(text: &str) -> Result<GraphFile, ParseError> {
    let spec = spec_comment(text);
    let mut lines = Lines::new(text);
    let (ln, header) = lines.next("header")?;
    if header != "tempex v1" {
        return Err(ParseError::new(ln, ParseErrorKind::MalformedHeader(header.to_string())));
    }
    let (ln, dims) = lines.next("dimensions")?;
    let vals = keyed(ln, dims, &["n", "T"])?;
    let n: usize = num(ln, vals[0])?;
    let lifetime: Time = num(ln, vals[1])?;
    let default_empty = match &vals[2..] {
        [] => false,
        ["default-empty"] => true,
        other => return Err(malformed(ln, format!("unexpected {other:?}"))),
    };
    let (ln, text) = lines.next("underlying")?;
    let count: usize = num(ln, keyed(ln, text, &["underlying"])?[0])?;
    let underlying = edges_block(&mut lines, n, count)?;

    let mut graph = None;
    if let Some(&(ln, text)) = lines.peek() {
        if text.starts_with("oracle") {
            lines.next("oracle")?;
            let toks: Vec<&str> = text.split_whitespace().collect();
            if toks.len() != 4 || toks[2] != "seed" {
                return Err(malformed(ln, "expected oracle <policy> seed <seed>"));
            }
            let policy: SnapshotPolicy = toks[1].parse().map_err(|e: String| malformed(ln, e))?;
            let seed: u64 = num(ln, toks[3])?;
            graph = Some(
                TemporalGraph::oracle(underlying.clone(), policy, seed, lifetime)
                    .map_err(|e| ParseError::new(ln, ParseErrorKind::Graph(e)))?,
            );
        }
    }
    let graph = match graph {
        Some(g) => g,
        None => {
            let mut snaps: Vec<StaticGraph> = Vec::with_capacity(lifetime);
            while let Some(&(ln, text)) = lines.peek() {
                if !text.starts_with("snapshot") {
                    break;
                }
                lines.next("snapshot")?;
                let toks: Vec<&str> = text.split_whitespace().collect();
                if toks.len() != 3 {
                    return Err(malformed(ln, "expected snapshot <t> <edge count>"));
                }
                let t: Time = num(ln, toks[1])?;
                let count: usize = num(ln, toks[2])?;
                let expected = snaps.len() + 1;
                if t < expected || t > lifetime || (!default_empty && t != expected) {
                    return Err(ParseError::new(ln, ParseErrorKind::SnapshotGap { expected, found: t }));
                }
                while snaps.len() + 1 < t {
                    snaps.push(StaticGraph::empty(n));
                }
                let s = edges_block(&mut lines, n, count)?;
                if let Some(e) = s.edges().iter().find(|e| !underlying.contains(**e)) {
                    return Err(ParseError::new(
                        ln,
                        ParseErrorKind::Graph(crate::GraphError::NotInUnderlying {
                            time: t,
                            u: e.lo(),
                            v: e.hi(),
                        }),
                    ));
                }
                snaps.push(s);
            }
            if snaps.len() < lifetime {
                if !default_empty {
                    return Err(ParseError::new(
                        lines.last + 1,
                        ParseErrorKind::UnexpectedEof("snapshot"),
                    ));
                }
                snaps.resize_with(lifetime, || StaticGraph::empty(n));
            }
            TemporalGraph::explicit(underlying, snaps, default_empty)
                .map_err(|e| ParseError::new(ln, ParseErrorKind::Graph(e)))?
        }
    };

    let mut anchors = None;
    if lines.peek().is_some() {
        let (ln, text) = lines.next("anchors")?;
        let count: usize = num(ln, keyed(ln, text, &["anchors"])?[0])?;
        let ids = if count == 0 {
            Vec::new()
        } else {
            let (ln2, text) = lines.next("anchor ids")?;
            let ids: Vec<Vertex> = text.split_whitespace().map(|t| num(ln2, t)).collect::<Result<_, _>>()?;
            if ids.len() != count {
                return Err(malformed(ln2, format!("expected {count} anchors, found {}", ids.len())));
            }
            ids
        };
        let set = AnchorSet::new(ids)
            .and_then(|s| s.check_range(n).map(|_| s))
            .map_err(|e| ParseError::new(ln, ParseErrorKind::Graph(e)))?;
        anchors = Some(set);
        if let Some(&(ln, text)) = lines.peek() {
            return Err(malformed(ln, format!("trailing content {text:?}")));
        }
    }
    Ok(GraphFile { graph, anchors, spec })
}

fn write_edges(out: &mut String, edges: &[Edge]) {
    for e in edges {
        let _ = writeln!(out, "{} {}", e.lo(), e.hi());
    }
}

fn write_ids(out: &mut String, ids: &[Vertex]) {
    let line: Vec<String> = ids.iter().map(Vertex::to_string).collect();
    let _ = writeln!(out, "{}", line.join(" "));
}

pub fn write_graph(g: &TemporalGraph, anchors: Option<&AnchorSet>, spec: Option<&GeneratorSpec>) -> String {
    let mut out = String::from("tempex v1\n");
    if let Some(spec) = spec {
        let _ = writeln!(out, "# spec {spec}");
    }
    let default_empty = matches!(
        g.backing(),
        Backing::Explicit {
            default_empty: true,
            ..
        }
    );
    let _ = writeln!(
        out,
        "n {} T {}{}",
        g.n(),
        g.lifetime(),
        if default_empty { " default-empty" } else { "" }
    );
    let u = g.underlying();
    let _ = writeln!(out, "underlying {}", u.edge_count());
    write_edges(&mut out, u.edges());
    match g.backing() {
        Backing::Oracle { policy, seed } => {
            let _ = writeln!(out, "oracle {policy} seed {seed}");
        }
        Backing::Explicit { snapshots, .. } => {
            for (i, s) in snapshots.iter().enumerate() {
                if default_empty && s.edge_count() == 0 {
                    continue;
                }
                let _ = writeln!(out, "snapshot {} {}", i + 1, s.edge_count());
                write_edges(&mut out, s.edges());
            }
        }
    }
    if let Some(s) = anchors {
        let _ = writeln!(out, "anchors {}", s.len());
        write_ids(&mut out, s.vertices());
    }
    out
}

pub fn load(path: impl AsRef<Path>) -> Result<GraphFile, FormatError> {
    Ok(parse_graph(&std::fs::read_to_string(path)?)?)
}

pub fn save(
    path: impl AsRef<Path>,
    g: &TemporalGraph,
    anchors: Option<&AnchorSet>,
    spec: Option<&GeneratorSpec>,
) -> Result<(), FormatError> {
    std::fs::write(path, write_graph(g, anchors, spec))?;
    Ok(())
}

/// ```text
/// tempex-schedule v1
/// target 3
/// 0 1 2
/// walks 1
/// walk 0 2
/// 0 1 1
/// 1 2 2
/// ```
pub fn write_schedule(s: &ExplorationSchedule) -> String {
    let mut out = String::from("tempex-schedule v1\n");
    let _ = writeln!(out, "target {}", s.target.len());
    if !s.target.is_empty() {
        write_ids(&mut out, &s.target);
    }
    let _ = writeln!(out, "walks {}", s.walks.len());
    for w in &s.walks {
        let _ = writeln!(out, "walk {} {}", w.start(), w.len());
        for st in w.steps() {
            let _ = writeln!(out, "{} {} {}", st.from, st.to, st.time);
        }
    }
    out
}

pub fn parse_schedule(text: &str) -> Result<ExplorationSchedule, ParseError> {
    let mut lines = Lines::new(text);
    let (ln, header) = lines.next("header")?;
    if header != "tempex-schedule v1" {
        return Err(ParseError::new(ln, ParseErrorKind::MalformedHeader(header.to_string())));
    }
    let (ln, text) = lines.next("target")?;
    let k: usize = num(ln, keyed(ln, text, &["target"])?[0])?;
    let target: Vec<Vertex> = if k == 0 {
        Vec::new()
    } else {
        let (ln, text) = lines.next("target ids")?;
        let ids: Vec<Vertex> = text.split_whitespace().map(|t| num(ln, t)).collect::<Result<_, _>>()?;
        if ids.len() != k {
            return Err(malformed(ln, format!("expected {k} target ids, found {}", ids.len())));
        }
        ids
    };
    let (ln, text) = lines.next("walks")?;
    let a: usize = num(ln, keyed(ln, text, &["walks"])?[0])?;
    let mut walks = Vec::with_capacity(a);
    for _ in 0..a {
        let (ln, text) = lines.next("walk")?;
        let vals = keyed(ln, text, &["walk"])?;
        if vals.len() != 2 {
            return Err(malformed(ln, "expected walk <start> <steps>"));
        }
        let start: Vertex = num(ln, vals[0])?;
        let len: usize = num(ln, vals[1])?;
        let mut steps = Vec::with_capacity(len);
        for _ in 0..len {
            let (ln, text) = lines.next("step")?;
            let toks: Vec<&str> = text.split_whitespace().collect();
            if toks.len() != 3 {
                return Err(malformed(ln, format!("expected <from> <to> <time>, found {text:?}")));
            }
            steps.push(Step {
                from: num(ln, toks[0])?,
                to: num(ln, toks[1])?,
                time: num(ln, toks[2])?,
            });
        }
        walks.push(TemporalWalk::from_steps(start, steps));
    }
    if let Some(&(ln, text)) = lines.peek() {
        return Err(malformed(ln, format!("trailing content {text:?}")));
    }
    Ok(ExplorationSchedule::new(walks, target))
}

/// ```text
/// division r 2 b 1
/// separator: 2
/// component: 0 1 | boundary: 2
/// component: 3 4 | boundary: 2
/// ```
pub fn write_division(d: &RBDivision) -> String {
    let ids = |v: &[Vertex]| v.iter().map(Vertex::to_string).collect::<Vec<_>>().join(" ");
    let mut out = String::new();
    let _ = writeln!(out, "division r {} b {}", d.r, d.b);
    let _ = writeln!(out, "separator: {}", ids(&d.separator));
    for c in &d.components {
        let _ = writeln!(out, "component: {} | boundary: {}", ids(&c.vertices), ids(&c.boundary));
    }
    out
}

pub fn parse_division(text: &str) -> Result<RBDivision, ParseError> {
    let mut lines = Lines::new(text);
    let (ln, head) = lines.next("division header")?;
    let toks: Vec<&str> = head.split_whitespace().collect();
    if toks.len() != 5 || toks[0] != "division" || toks[1] != "r" || toks[3] != "b" {
        return Err(ParseError::new(ln, ParseErrorKind::MalformedHeader(head.to_string())));
    }
    let r: usize = num(ln, toks[2])?;
    let b: usize = num(ln, toks[4])?;
    let ids =
        |ln: usize, s: &str| -> Result<Vec<Vertex>, ParseError> { s.split_whitespace().map(|t| num(ln, t)).collect() };
    let (ln, text) = lines.next("separator")?;
    let sep = text
        .strip_prefix("separator:")
        .ok_or_else(|| malformed(ln, "expected separator:"))?;
    let separator = ids(ln, sep)?;
    let mut components = Vec::new();
    while lines.peek().is_some() {
        let (ln, text) = lines.next("component")?;
        let body = text
            .strip_prefix("component:")
            .ok_or_else(|| malformed(ln, "expected component:"))?;
        let (vs, bd) = body
            .split_once("| boundary:")
            .ok_or_else(|| malformed(ln, "expected | boundary:"))?;
        components.push(DivisionComponent {
            vertices: ids(ln, vs)?,
            boundary: ids(ln, bd)?,
        });
    }
    Ok(RBDivision {
        r,
        b,
        separator,
        components,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> TemporalGraph {
        let a = StaticGraph::new(4, [(0, 1), (2, 3)]).unwrap();
        let b = StaticGraph::new(4, [(1, 2)]).unwrap();
        let c = StaticGraph::empty(4);
        TemporalGraph::from_snapshots(4, vec![a, b, c]).unwrap()
    }

    #[test]
    fn graph_round_trip() {
        let g = sample();
        let s = AnchorSet::new(vec![0, 3]).unwrap();
        let text = write_graph(&g, Some(&s), None);
        let back = parse_graph(&text).unwrap();
        assert_eq!(back.graph, g);
        assert_eq!(back.anchors, Some(s));
    }

    #[test]
    fn self_loop_reported_with_line() {
        let text = "tempex v1\nn 6 T 1\nunderlying 2\n0 1\n5 5\nsnapshot 1 0\n";
        let err = parse_graph(text).unwrap_err();
        assert_eq!(err.line, 5);
        assert!(err.to_string().contains("self-loop"), "{err}");
    }

    #[test]
    fn snapshot_edge_outside_underlying() {
        let text = "tempex v1\nn 3 T 1\nunderlying 1\n0 1\nsnapshot 1 1\n1 2\n";
        assert!(matches!(
            parse_graph(text).unwrap_err().kind,
            ParseErrorKind::Graph(crate::GraphError::NotInUnderlying { .. })
        ));
    }

    #[test]
    fn snapshot_gap() {
        let text = "tempex v1\nn 3 T 3\nunderlying 1\n0 1\nsnapshot 1 0\nsnapshot 3 0\n";
        let err = parse_graph(text).unwrap_err();
        assert_eq!(err.line, 6);
        assert!(matches!(
            err.kind,
            ParseErrorKind::SnapshotGap { expected: 2, found: 3 }
        ));
    }

    #[test]
    fn bad_header() {
        assert!(matches!(
            parse_graph("tempex v2\n").unwrap_err().kind,
            ParseErrorKind::MalformedHeader(_)
        ));
    }

    #[test]
    fn schedule_round_trip() {
        let mut w = TemporalWalk::new(0);
        w.push(0, 1, 1);
        let s = ExplorationSchedule::new(vec![w, TemporalWalk::new(3)], vec![1, 0, 3]);
        assert_eq!(parse_schedule(&write_schedule(&s)).unwrap(), s);
        let empty = ExplorationSchedule::new(vec![], vec![]);
        assert_eq!(parse_schedule(&write_schedule(&empty)).unwrap(), empty);
    }

    #[test]
    fn division_round_trip() {
        let g = StaticGraph::new(5, [(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        let d = RBDivision::from_groups(&g, 2, 1, vec![2], vec![vec![0, 1], vec![3, 4]]);
        assert_eq!(parse_division(&write_division(&d)).unwrap(), d);
    }
}
