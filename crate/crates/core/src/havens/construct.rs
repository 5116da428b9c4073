use std::collections::BTreeMap;

use super::{check_haven, HavenCertificate};
use crate::digraph::{eulerianize, strong_components, Digraph, Subdigraph, Vertex, VertexSet};
use crate::error::{Error, Result};
use crate::report::Report;

/// A representation of a pattern graph `G` in a host digraph: one strongly
/// connected subdigraph per vertex of `G` and one 2-eulerianizable strongly
/// connected subdigraph per edge of `G`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation {
    pub host: Digraph,
    /// `ν⁻¹`: pattern vertex to its subdigraph.
    pub vertex_subs: BTreeMap<Vertex, Subdigraph>,
    /// `ε⁻¹`: pattern edge `(u, v)` to its subdigraph.
    pub edge_subs: Vec<((Vertex, Vertex), Subdigraph)>,
}

impl Representation {
    /// The pattern graph as a bidirected digraph on the keys of `vertex_subs`.
    pub fn pattern(&self) -> Digraph {
        let mut g = Digraph::new();
        for &v in self.vertex_subs.keys() {
            g.add_vertex(v);
        }
        for &((u, v), _) in &self.edge_subs {
            if g.has_vertex(u) && g.has_vertex(v) {
                g.add_edge(u, v).expect("pattern vertices present");
                g.add_edge(v, u).expect("pattern vertices present");
            }
        }
        g
    }

    pub fn validate(&self) -> Report {
        let mut r = Report::new();
        let check_member = |name: String, s: &Subdigraph, k: Option<usize>, r: &mut Report| {
            match s.materialize(&self.host) {
                Err(e) => r.push("membership", format!("{name}: {e}")),
                Ok(m) => {
                    if m.is_empty() || !m.is_strongly_connected() {
                        r.push("strongly-connected", format!("{name} is not strongly connected"));
                    } else if let Some(k) = k {
                        if !matches!(eulerianize(&m, k), Ok(Some(_))) {
                            r.push("eulerianizable", format!("{name} is not {k}-eulerianizable"));
                        }
                    }
                }
            }
        };
        for (u, s) in &self.vertex_subs {
            check_member(format!("vertex member {u}"), s, None, &mut r);
        }
        for (i, ((u, v), s)) in self.edge_subs.iter().enumerate() {
            check_member(format!("edge member {i}"), s, Some(2), &mut r);
            if u == v {
                r.push("pattern", format!("edge member {i} has equal ends"));
            }
            for w in [u, v] {
                match self.vertex_subs.get(w) {
                    None => r.push("pattern", format!("edge member {i} has unknown end {w}")),
                    Some(vs) if !s.meets(vs) => {
                        r.push("incidence", format!("edge member {i} misses the member of {w}"));
                    }
                    _ => {}
                }
            }
        }
        let vs: Vec<_> = self.vertex_subs.iter().collect();
        for (i, (a, sa)) in vs.iter().enumerate() {
            for (b, sb) in &vs[i + 1..] {
                if sa.meets(sb) {
                    r.push("vertex-disjoint", format!("vertex members {a} and {b} intersect"));
                }
            }
        }
        for (i, (_, sa)) in self.edge_subs.iter().enumerate() {
            for (j, (_, sb)) in self.edge_subs.iter().enumerate().skip(i + 1) {
                if sa.meets(sb) {
                    r.push("edge-disjoint", format!("edge members {i} and {j} intersect"));
                }
            }
        }
        r
    }

    /// Every edge member meets only the vertex members of its own ends.
    pub fn is_faithful(&self) -> bool {
        self.edge_subs.iter().all(|((u, v), s)| {
            self.vertex_subs
                .iter()
                .all(|(w, vs)| w == u || w == v || !s.meets(vs))
        })
    }

    /// The pattern vertices a host vertex is charged to.
    fn charge(&self, x: Vertex) -> VertexSet {
        let mut m = VertexSet::new();
        for (&u, s) in &self.vertex_subs {
            if s.vertices.contains(&x) {
                m.insert(u);
            }
        }
        for &((u, v), ref s) in &self.edge_subs {
            if s.vertices.contains(&x) {
                m.insert(u);
                m.insert(v);
            }
        }
        m
    }
}

/// Transfers a haven of order `h+1` of the pattern graph to a haven of order
/// `h/2+1` of the host.
pub fn haven_from_representation(rep: &Representation, cert_g: &HavenCertificate) -> Result<HavenCertificate> {
    let h = cert_g.order.saturating_sub(1);
    if h == 0 || h % 2 == 1 {
        return Err(Error::Precondition(format!("pattern haven order {} gives odd or zero h", cert_g.order)));
    }
    rep.validate()
        .into_result()
        .map_err(|e| Error::Precondition(format!("invalid representation: {e}")))?;
    if !rep.is_faithful() {
        return Err(Error::Precondition("representation is not faithful".into()));
    }
    let g = rep.pattern();
    check_haven(&g, cert_g)
        .into_result()
        .map_err(|e| Error::Precondition(format!("invalid pattern certificate: {e}")))?;
    let cert = HavenCertificate::tabulate(&rep.host, h / 2 + 1, |x| {
        let y: VertexSet = x.iter().flat_map(|&v| rep.charge(v)).collect();
        let u = *cert_g.component(&g, &y)?.iter().next()?;
        rep.vertex_subs[&u].vertices.iter().copied().find(|v| !x.contains(v))
    })
    .ok_or_else(|| Error::Verification("representation haven construction failed".into()))?;
    check_haven(&rep.host, &cert).into_result()?;
    Ok(cert)
}

/// Builds a haven of order `n+1` on the union of a family of at least `2n+1`
/// pairwise intersecting strongly connected subdigraphs, no vertex lying in
/// three of them. Returns the union digraph with its certificate.
pub fn haven_from_intersecting_family(
    d: &Digraph,
    subs: &[Subdigraph],
    n: usize,
) -> Result<(Digraph, HavenCertificate)> {
    if subs.len() < 2 * n + 1 {
        return Err(Error::Precondition(format!(
            "count: {} subdigraphs, need at least {}",
            subs.len(),
            2 * n + 1
        )));
    }
    for (i, a) in subs.iter().enumerate() {
        for (j, b) in subs.iter().enumerate().skip(i + 1) {
            if !a.meets(b) {
                return Err(Error::Precondition(format!("disjoint-pair: members {i} and {j}")));
            }
        }
    }
    let mut cover: BTreeMap<Vertex, usize> = BTreeMap::new();
    for s in subs {
        for &v in &s.vertices {
            *cover.entry(v).or_default() += 1;
        }
    }
    if let Some((v, _)) = cover.iter().find(|(_, &c)| c > 2) {
        return Err(Error::Precondition(format!("3-covered: vertex {v}")));
    }
    for (i, s) in subs.iter().enumerate() {
        let m = s.materialize(d)?;
        if !m.is_strongly_connected() {
            return Err(Error::Precondition(format!("member {i} is not strongly connected")));
        }
    }
    let mut union = Subdigraph::default();
    for s in subs {
        union.vertices.extend(&s.vertices);
        union.edges.extend(&s.edges);
    }
    let dp = union.materialize(d)?;
    let cert = HavenCertificate::tabulate(&dp, n + 1, |x| {
        subs.iter().find(|s| !s.meets_set(x)).and_then(|s| s.vertices.iter().next().copied())
    })
    .ok_or_else(|| Error::Verification("intersecting family haven construction failed".into()))?;
    check_haven(&dp, &cert).into_result()?;
    Ok((dp, cert))
}

/// The cubic grid (elementary wall) with `rows` rows of `cols` vertices, as a
/// bidirected digraph. Vertex `(r, c)` has id `r * cols + c`.
pub fn wall_graph(rows: usize, cols: usize) -> Digraph {
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            let v = r * cols + c;
            if c + 1 < cols {
                edges.push((v, v + 1));
            }
            if r + 1 < rows && (r + c) % 2 == 0 {
                edges.push((v, v + cols));
            }
        }
    }
    Digraph::bidirected(rows * cols, &edges)
}

/// The haven of order `h+1` on the `2h` by `4h` wall that picks the largest
/// remaining component (ties to the smallest vertex). Checked, not assumed.
pub fn wall_haven(h: usize) -> Result<(Digraph, HavenCertificate)> {
    let g = wall_graph(2 * h, 4 * h);
    let cert = HavenCertificate::tabulate(&g, h + 1, |z| {
        let rest = g.without(z);
        let comps = strong_components(&rest);
        comps
            .components()
            .iter()
            .max_by_key(|c| (c.len(), std::cmp::Reverse(c.iter().next().copied())))
            .and_then(|c| c.iter().next().copied())
    })
    .ok_or_else(|| Error::Verification("wall too small for the requested order".into()))?;
    check_haven(&g, &cert).into_result()?;
    Ok((g, cert))
}
