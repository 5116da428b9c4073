//! The line-based DGF document format.
//!
//! ```text
//! digraph NAME
//! v ID
//! e EID TAIL HEAD
//! embedding disk|cylinder
//! outer EID +|-
//! hole EID +|-
//! rot V END...
//! mark T|L|B|R V...
//! path NAME V E V ... V
//! circuit NAME V E V ... V
//! cut NAME V...
//! cert NAME ... end
//! script NAME ... end
//! config ... end
//! ```
//!
//! A rotation entry is an edge id, or for a loop `IDt` / `IDh` naming its
//! tail or head end. Lines starting with `#` are comments.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use cylgrid::embedding::{Dart, End, Role, RotationEmbedding, Surface};
use cylgrid::gridextract::PipelineConfig;
use cylgrid::havens::HavenCertificate;
use cylgrid::minors::{MinorModel, Step};
use cylgrid::{Digraph, DirectedPath, EdgeId, Error, Result, Vertex, VertexSet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// A path or, when it closes up, a circuit.
    Path(String, DirectedPath),
    /// An ordered list of vertices.
    Cut(String, Vec<Vertex>),
    Cert(String, HavenCertificate),
    Script(String, MinorModel),
}

impl Witness {
    pub fn name(&self) -> &str {
        match self {
            Witness::Path(n, _) | Witness::Cut(n, _) | Witness::Cert(n, _) | Witness::Script(n, _) => n,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgfDocument {
    pub name: String,
    pub digraph: Digraph,
    pub embedding: Option<RotationEmbedding>,
    pub witnesses: Vec<Witness>,
    pub config: Option<PipelineConfig>,
}

impl DgfDocument {
    pub fn new(name: impl Into<String>, digraph: Digraph) -> Self {
        DgfDocument {
            name: name.into(),
            digraph,
            embedding: None,
            witnesses: Vec::new(),
            config: None,
        }
    }

    pub fn witness(&self, name: &str) -> Option<&Witness> {
        self.witnesses.iter().find(|w| w.name() == name)
    }

    /// Paths named `prefix` followed by digits, in document order.
    pub fn paths_with_prefix(&self, prefix: &str) -> Vec<DirectedPath> {
        self.witnesses
            .iter()
            .filter_map(|w| match w {
                Witness::Path(n, p) if numbered(n, prefix) => Some(p.clone()),
                _ => None,
            })
            .collect()
    }

    pub fn cuts_with_prefix(&self, prefix: &str) -> Vec<Vec<Vertex>> {
        self.witnesses
            .iter()
            .filter_map(|w| match w {
                Witness::Cut(n, c) if numbered(n, prefix) => Some(c.clone()),
                _ => None,
            })
            .collect()
    }

    pub fn push_path(&mut self, name: impl Into<String>, p: DirectedPath) {
        self.witnesses.push(Witness::Path(name.into(), p));
    }
}

fn numbered(name: &str, prefix: &str) -> bool {
    name.strip_prefix(prefix)
        .is_some_and(|rest| !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()))
}

struct Tok<'a> {
    col: usize,
    text: &'a str,
}

fn tokens(line: &str) -> Vec<Tok<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push(Tok { col: s + 1, text: &line[s..i] });
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push(Tok { col: s + 1, text: &line[s..] });
    }
    out
}

fn perr(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn num(line: usize, t: &Tok<'_>) -> Result<usize> {
    t.text
        .parse()
        .map_err(|_| perr(line, t.col, format!("expected a number, found `{}`", t.text)))
}

fn arity(line: usize, toks: &[Tok<'_>], n: usize) -> Result<()> {
    if toks.len() == n {
        Ok(())
    } else {
        let col = toks.get(n).map_or(toks[0].col, |t| t.col);
        Err(perr(line, col, format!("`{}` takes {} fields", toks[0].text, n - 1)))
    }
}

struct PendingPath {
    line: usize,
    circuit: bool,
    name: String,
    vertices: Vec<(usize, Vertex)>,
    edges: Vec<(usize, EdgeId)>,
}

enum Pending {
    Path(PendingPath),
    Cut(usize, String, Vec<(usize, Vertex)>),
    Cert(String, HavenCertificate, Vec<(usize, usize, Vertex)>),
    Script(String, MinorModel),
}

#[derive(Default)]
struct EmbeddingLines {
    line: usize,
    surface: Option<Surface>,
    outer: Option<(usize, usize, Dart)>,
    hole: Option<(usize, usize, Dart)>,
    rot: BTreeMap<Vertex, (usize, usize, Vec<(usize, EdgeId, Option<bool>)>)>,
    roles: BTreeMap<Vertex, Role>,
    role_refs: Vec<(usize, usize, Vertex)>,
}

fn dart(line: usize, toks: &[Tok<'_>]) -> Result<Dart> {
    arity(line, toks, 3)?;
    let edge = num(line, &toks[1])?;
    let forward = match toks[2].text {
        "+" => true,
        "-" => false,
        other => return Err(perr(line, toks[2].col, format!("expected + or -, found `{other}`"))),
    };
    Ok(Dart { edge, forward })
}

/// Parses `order: w` and `Z: v... -> rep` lines.
fn cert_line(cert: &mut HavenCertificate, refs: &mut Vec<(usize, usize, Vertex)>, ln: usize, raw: &str) -> Result<()> {
    let toks = tokens(raw);
    match toks[0].text {
        "order:" => {
            arity(ln, &toks, 2)?;
            cert.order = num(ln, &toks[1])?;
        }
        "Z:" => {
            let arrow = toks
                .iter()
                .position(|t| t.text == "->")
                .ok_or_else(|| perr(ln, toks[0].col, "missing `->`"))?;
            arity(ln, &toks[arrow..], 2)?;
            let mut z = VertexSet::new();
            for t in &toks[1..arrow] {
                let v = num(ln, t)?;
                refs.push((ln, t.col, v));
                if !z.insert(v) {
                    return Err(perr(ln, t.col, format!("vertex {v} repeated")));
                }
            }
            let rep = num(ln, &toks[arrow + 1])?;
            refs.push((ln, toks[arrow + 1].col, rep));
            if cert.table.insert(z, rep).is_some() {
                return Err(perr(ln, toks[0].col, "duplicate entry"));
            }
        }
        other => return Err(perr(ln, toks[0].col, format!("unexpected `{other}` in certificate"))),
    }
    Ok(())
}

fn script_line(model: &mut MinorModel, ln: usize, toks: &[Tok<'_>]) -> Result<()> {
    match (toks[0].text, toks.get(1).map(|t| t.text)) {
        ("del", Some("v")) => {
            arity(ln, toks, 3)?;
            model.steps.push(Step::DeleteVertex(num(ln, &toks[2])?));
        }
        ("del", Some("e")) => {
            arity(ln, toks, 3)?;
            model.steps.push(Step::DeleteEdge(num(ln, &toks[2])?));
        }
        ("contract", _) => {
            arity(ln, toks, 2)?;
            model.steps.push(Step::Contract(num(ln, &toks[1])?));
        }
        ("map", _) => {
            arity(ln, toks, 3)?;
            let a = num(ln, &toks[1])?;
            if model.map.insert(a, num(ln, &toks[2])?).is_some() {
                return Err(perr(ln, toks[1].col, format!("vertex {a} mapped twice")));
            }
        }
        (other, _) => return Err(perr(ln, toks[0].col, format!("unexpected `{other}` in script"))),
    }
    Ok(())
}

/// Reads the certificate file format: an `order: w` line and one
/// `Z: v1 v2 ... -> rep` line per entry.
pub fn parse_certificate(text: &str) -> Result<HavenCertificate> {
    let mut cert = HavenCertificate::default();
    let mut refs = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let t = raw.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        cert_line(&mut cert, &mut refs, i + 1, raw)?;
    }
    Ok(cert)
}

pub fn write_certificate(cert: &HavenCertificate) -> String {
    let mut s = format!("order: {}\n", cert.order);
    for (z, rep) in &cert.table {
        s.push_str("Z:");
        for v in z {
            let _ = write!(s, " {v}");
        }
        let _ = writeln!(s, " -> {rep}");
    }
    s
}

pub fn parse_dgf(text: &str) -> Result<DgfDocument> {
    let mut name: Option<String> = None;
    let mut d = Digraph::new();
    let mut edge_refs: Vec<(usize, usize, usize, Vertex)> = Vec::new();
    let mut edge_ids = BTreeSet::new();
    let mut emb: Option<EmbeddingLines> = None;
    let mut pending: Vec<Pending> = Vec::new();
    let mut config: Option<PipelineConfig> = None;
    let mut names = BTreeSet::new();
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));

    let mut claim = |ln: usize, t: &Tok<'_>| -> Result<String> {
        if names.insert(t.text.to_string()) {
            Ok(t.text.to_string())
        } else {
            Err(perr(ln, t.col, format!("witness `{}` defined twice", t.text)))
        }
    };

    while let Some((ln, raw)) = lines.next() {
        let toks = tokens(raw);
        if toks.is_empty() || toks[0].text.starts_with('#') {
            continue;
        }
        let head = &toks[0];
        let needs_graph = |name: &Option<String>| -> Result<()> {
            if name.is_none() {
                Err(perr(ln, head.col, "document must start with `digraph NAME`"))
            } else {
                Ok(())
            }
        };
        match head.text {
            "digraph" => {
                arity(ln, &toks, 2)?;
                if name.is_some() {
                    return Err(perr(ln, head.col, "second digraph block"));
                }
                name = Some(toks[1].text.to_string());
            }
            "v" => {
                needs_graph(&name)?;
                arity(ln, &toks, 2)?;
                let v = num(ln, &toks[1])?;
                if !d.add_vertex(v) {
                    return Err(perr(ln, toks[1].col, format!("vertex {v} defined twice")));
                }
            }
            "e" => {
                needs_graph(&name)?;
                arity(ln, &toks, 4)?;
                let id = num(ln, &toks[1])?;
                let (t, h) = (num(ln, &toks[2])?, num(ln, &toks[3])?);
                edge_refs.push((ln, toks[2].col, id, t));
                edge_refs.push((ln, toks[3].col, id, h));
                if !edge_ids.insert(id) {
                    return Err(perr(ln, toks[1].col, format!("edge {id} defined twice")));
                }
            }
            "embedding" => {
                needs_graph(&name)?;
                arity(ln, &toks, 2)?;
                if emb.is_some() {
                    return Err(perr(ln, head.col, "second embedding block"));
                }
                let surface = match toks[1].text {
                    "disk" => Surface::Disk,
                    "cylinder" => Surface::Cylinder,
                    other => return Err(perr(ln, toks[1].col, format!("unknown surface `{other}`"))),
                };
                emb = Some(EmbeddingLines {
                    line: ln,
                    surface: Some(surface),
                    ..Default::default()
                });
            }
            "outer" | "hole" | "rot" | "mark" => {
                let e = emb
                    .as_mut()
                    .ok_or_else(|| perr(ln, head.col, format!("`{}` before `embedding`", head.text)))?;
                match head.text {
                    "outer" | "hole" => {
                        let slot = if head.text == "outer" { &mut e.outer } else { &mut e.hole };
                        if slot.is_some() {
                            return Err(perr(ln, head.col, format!("second `{}` line", head.text)));
                        }
                        *slot = Some((ln, toks[1].col, dart(ln, &toks)?));
                    }
                    "rot" => {
                        if toks.len() < 2 {
                            return Err(perr(ln, head.col, "`rot` needs a vertex"));
                        }
                        let v = num(ln, &toks[1])?;
                        let mut ends = Vec::new();
                        for t in &toks[2..] {
                            let (digits, side) = match t.text.strip_suffix('t') {
                                Some(x) => (x, Some(true)),
                                None => match t.text.strip_suffix('h') {
                                    Some(x) => (x, Some(false)),
                                    None => (t.text, None),
                                },
                            };
                            let id = digits
                                .parse()
                                .map_err(|_| perr(ln, t.col, format!("bad edge end `{}`", t.text)))?;
                            ends.push((t.col, id, side));
                        }
                        if e.rot.insert(v, (ln, toks[1].col, ends)).is_some() {
                            return Err(perr(ln, toks[1].col, format!("second rotation for vertex {v}")));
                        }
                    }
                    _ => {
                        if toks.len() < 2 {
                            return Err(perr(ln, head.col, "`mark` needs a role"));
                        }
                        let role = Role::parse(toks[1].text)
                            .ok_or_else(|| perr(ln, toks[1].col, format!("unknown role `{}`", toks[1].text)))?;
                        for t in &toks[2..] {
                            let v = num(ln, t)?;
                            e.role_refs.push((ln, t.col, v));
                            if e.roles.insert(v, role).is_some() {
                                return Err(perr(ln, t.col, format!("vertex {v} marked twice")));
                            }
                        }
                    }
                }
            }
            "path" | "circuit" => {
                needs_graph(&name)?;
                if toks.len() < 3 || toks.len().is_multiple_of(2) {
                    return Err(perr(ln, head.col, "expected NAME V E V ... V"));
                }
                let name = claim(ln, &toks[1])?;
                let mut vertices = Vec::new();
                let mut edges = Vec::new();
                for (i, t) in toks[2..].iter().enumerate() {
                    let x = num(ln, t)?;
                    if i % 2 == 0 {
                        vertices.push((t.col, x));
                    } else {
                        edges.push((t.col, x));
                    }
                }
                pending.push(Pending::Path(PendingPath {
                    line: ln,
                    circuit: head.text == "circuit",
                    name,
                    vertices,
                    edges,
                }));
            }
            "cut" => {
                needs_graph(&name)?;
                if toks.len() < 2 {
                    return Err(perr(ln, head.col, "`cut` needs a name"));
                }
                let name = claim(ln, &toks[1])?;
                let vs = toks[2..].iter().map(|t| Ok((t.col, num(ln, t)?))).collect::<Result<_>>()?;
                pending.push(Pending::Cut(ln, name, vs));
            }
            "cert" | "script" | "config" => {
                needs_graph(&name)?;
                let kind = head.text;
                let wname = if kind == "config" {
                    arity(ln, &toks, 1)?;
                    if config.is_some() {
                        return Err(perr(ln, head.col, "second config block"));
                    }
                    None
                } else {
                    arity(ln, &toks, 2)?;
                    Some(claim(ln, &toks[1])?)
                };
                let mut body = Vec::new();
                let mut closed = false;
                for (bl, braw) in lines.by_ref() {
                    let bt = braw.trim();
                    if bt == "end" {
                        closed = true;
                        break;
                    }
                    body.push((bl, braw));
                }
                if !closed {
                    return Err(perr(ln, head.col, format!("`{kind}` block is not closed by `end`")));
                }
                let body: Vec<(usize, &str)> = body
                    .into_iter()
                    .filter(|(_, l)| !l.trim().is_empty() && !l.trim().starts_with('#'))
                    .collect();
                match kind {
                    "cert" => {
                        let mut cert = HavenCertificate::default();
                        let mut refs = Vec::new();
                        for (bl, braw) in body {
                            cert_line(&mut cert, &mut refs, bl, braw)?;
                        }
                        pending.push(Pending::Cert(wname.unwrap(), cert, refs));
                    }
                    "script" => {
                        let mut model = MinorModel::default();
                        for (bl, braw) in body {
                            script_line(&mut model, bl, &tokens(braw))?;
                        }
                        pending.push(Pending::Script(wname.unwrap(), model));
                    }
                    _ => {
                        let mut text = String::new();
                        let first = body.first().map_or(ln, |b| b.0);
                        for (_, braw) in &body {
                            text.push_str(braw);
                            text.push('\n');
                        }
                        config = Some(PipelineConfig::from_key_values(&text).map_err(|e| match e {
                            Error::Parse { line, column, message } => Error::Parse {
                                line: body.get(line - 1).map_or(first, |b| b.0),
                                column,
                                message,
                            },
                            other => other,
                        })?);
                    }
                }
            }
            other => return Err(perr(ln, head.col, format!("unknown keyword `{other}`"))),
        }
    }

    let name = name.ok_or_else(|| perr(1, 1, "document must start with `digraph NAME`"))?;
    for pair in edge_refs.chunks(2) {
        let (ln, _, id, t) = pair[0];
        let (_, _, _, h) = pair[1];
        for &(l, c, _, v) in pair {
            if !d.has_vertex(v) {
                return Err(perr(l, c, format!("unknown vertex {v}")));
            }
        }
        d.add_edge_with_id(id, t, h).map_err(|e| perr(ln, 1, e.to_string()))?;
    }

    let embedding = match emb {
        None => None,
        Some(e) => Some(build_embedding(&d, e)?),
    };

    let check_vertex = |ln: usize, col: usize, v: Vertex| -> Result<()> {
        if d.has_vertex(v) {
            Ok(())
        } else {
            Err(perr(ln, col, format!("unknown vertex {v}")))
        }
    };
    let mut witnesses = Vec::new();
    for p in pending {
        witnesses.push(match p {
            Pending::Path(pp) => {
                for &(c, v) in &pp.vertices {
                    check_vertex(pp.line, c, v)?;
                }
                for &(c, e) in &pp.edges {
                    if !d.has_edge(e) {
                        return Err(perr(pp.line, c, format!("unknown edge {e}")));
                    }
                }
                let vs: Vec<Vertex> = pp.vertices.iter().map(|x| x.1).collect();
                let es: Vec<EdgeId> = pp.edges.iter().map(|x| x.1).collect();
                let path = DirectedPath::new(&d, vs, es).map_err(|e| perr(pp.line, 1, e.to_string()))?;
                if path.is_circuit() != pp.circuit {
                    let what = if pp.circuit { "a circuit must end where it starts" } else { "a path must not close up" };
                    return Err(perr(pp.line, 1, what));
                }
                Witness::Path(pp.name, path)
            }
            Pending::Cut(ln, name, vs) => {
                for &(c, v) in &vs {
                    check_vertex(ln, c, v)?;
                }
                Witness::Cut(name, vs.into_iter().map(|x| x.1).collect())
            }
            Pending::Cert(name, cert, refs) => {
                for (l, c, v) in refs {
                    check_vertex(l, c, v)?;
                }
                Witness::Cert(name, cert)
            }
            Pending::Script(name, model) => Witness::Script(name, model),
        });
    }
    Ok(DgfDocument {
        name,
        digraph: d,
        embedding,
        witnesses,
        config,
    })
}

fn build_embedding(d: &Digraph, e: EmbeddingLines) -> Result<RotationEmbedding> {
    for &(l, c, v) in &e.role_refs {
        if !d.has_vertex(v) {
            return Err(perr(l, c, format!("unknown vertex {v}")));
        }
    }
    for (l, c, dt) in [e.outer, e.hole].into_iter().flatten() {
        if !d.has_edge(dt.edge) {
            return Err(perr(l, c, format!("unknown edge {}", dt.edge)));
        }
    }
    let mut rotation = BTreeMap::new();
    for (&v, (l, c, ends)) in &e.rot {
        if !d.has_vertex(v) {
            return Err(perr(*l, *c, format!("unknown vertex {v}")));
        }
        let mut out = Vec::new();
        for &(col, id, side) in ends {
            let edge = d.edge(id).ok_or_else(|| perr(*l, col, format!("unknown edge {id}")))?;
            let at_tail = match side {
                Some(s) => s,
                None if edge.is_loop() => return Err(perr(*l, col, format!("loop {id} needs a t or h suffix"))),
                None => edge.tail == v,
            };
            let at = if at_tail { edge.tail } else { edge.head };
            if at != v {
                return Err(perr(*l, col, format!("edge {id} has no end at vertex {v}")));
            }
            out.push(End { edge: id, at_tail });
        }
        rotation.insert(v, out);
    }
    RotationEmbedding::new(
        d.clone(),
        rotation,
        e.surface.unwrap(),
        e.outer.map(|x| x.2),
        e.hole.map(|x| x.2),
        e.roles,
    )
    .map_err(|err| perr(e.line, 1, err.to_string()))
}

fn write_path(s: &mut String, name: &str, p: &DirectedPath) {
    s.push_str(if p.is_circuit() { "circuit " } else { "path " });
    s.push_str(name);
    for (i, v) in p.vertices().iter().enumerate() {
        let _ = write!(s, " {v}");
        if let Some(e) = p.edges().get(i) {
            let _ = write!(s, " {e}");
        }
    }
    s.push('\n');
}

/// Canonical text of a document. Rotations start at their smallest end and
/// marks are grouped by role in the order T, L, B, R.
pub fn serialize_dgf(doc: &DgfDocument) -> String {
    let mut s = String::new();
    let d = &doc.digraph;
    let _ = writeln!(s, "digraph {}", doc.name);
    for v in d.vertices() {
        let _ = writeln!(s, "v {v}");
    }
    for e in d.edges() {
        let _ = writeln!(s, "e {} {} {}", e.id, e.tail, e.head);
    }
    if let Some(emb) = &doc.embedding {
        let surface = match emb.surface() {
            Surface::Disk => "disk",
            Surface::Cylinder => "cylinder",
        };
        let _ = writeln!(s, "embedding {surface}");
        for (kw, dt) in [("outer", emb.outer_dart()), ("hole", emb.hole_dart())] {
            if let Some(dt) = dt {
                let _ = writeln!(s, "{kw} {} {}", dt.edge, if dt.forward { "+" } else { "-" });
            }
        }
        for (&v, ends) in emb.rotations() {
            let _ = write!(s, "rot {v}");
            let start = ends.iter().enumerate().min_by_key(|(_, e)| **e).map_or(0, |(i, _)| i);
            for k in 0..ends.len() {
                let end = ends[(start + k) % ends.len()];
                let _ = write!(s, " {}", end.edge);
                if d.edge(end.edge).is_some_and(|x| x.is_loop()) {
                    s.push(if end.at_tail { 't' } else { 'h' });
                }
            }
            s.push('\n');
        }
        for role in [Role::T, Role::L, Role::B, Role::R] {
            let vs = emb.vertices_with_role(role);
            if !vs.is_empty() {
                let _ = write!(s, "mark {role}");
                for v in vs {
                    let _ = write!(s, " {v}");
                }
                s.push('\n');
            }
        }
    }
    for w in &doc.witnesses {
        match w {
            Witness::Path(name, p) => write_path(&mut s, name, p),
            Witness::Cut(name, vs) => {
                let _ = write!(s, "cut {name}");
                for v in vs {
                    let _ = write!(s, " {v}");
                }
                s.push('\n');
            }
            Witness::Cert(name, cert) => {
                let _ = writeln!(s, "cert {name}");
                s.push_str(&write_certificate(cert));
                s.push_str("end\n");
            }
            Witness::Script(name, model) => {
                let _ = writeln!(s, "script {name}");
                for step in &model.steps {
                    let _ = writeln!(s, "{step}");
                }
                for (a, b) in &model.map {
                    let _ = writeln!(s, "map {a} {b}");
                }
                s.push_str("end\n");
            }
        }
    }
    if let Some(cfg) = &doc.config {
        s.push_str("config\n");
        s.push_str(&cfg.to_string());
        s.push_str("end\n");
    }
    s
}
