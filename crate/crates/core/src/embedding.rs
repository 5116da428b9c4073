//! Combinatorial plane embeddings given by rotation systems, with disk
//! (`T`, `L`, `B`, `R`) and cylinder (`T`, `B`) boundary structures.
//!
//! A rotation lists the edge-ends at each vertex in counter-clockwise order.
//! Faces are traced keeping the face on the right of travel, so bounded faces
//! come out clockwise and the outer face counter-clockwise.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use crate::digraph::{Digraph, DirectedPath, EdgeId, Vertex, VertexSet};
use crate::error::{Error, Result};
use crate::report::Report;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    T,
    L,
    B,
    R,
}

impl Role {
    pub fn parse(s: &str) -> Option<Role> {
        match s {
            "T" => Some(Role::T),
            "L" => Some(Role::L),
            "B" => Some(Role::B),
            "R" => Some(Role::R),
            _ => None,
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Role::T => "T",
            Role::L => "L",
            Role::B => "B",
            Role::R => "R",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Surface {
    Disk,
    Cylinder,
}

/// One end of an edge: the tail end or the head end.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct End {
    pub edge: EdgeId,
    pub at_tail: bool,
}

/// An edge with a direction of traversal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dart {
    pub edge: EdgeId,
    pub forward: bool,
}

impl Dart {
    pub fn reverse(self) -> Dart {
        Dart {
            edge: self.edge,
            forward: !self.forward,
        }
    }

    pub fn origin_end(self) -> End {
        End {
            edge: self.edge,
            at_tail: self.forward,
        }
    }

    pub fn dest_end(self) -> End {
        End {
            edge: self.edge,
            at_tail: !self.forward,
        }
    }
}

/// Side of a path relative to its direction of travel.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    TravelLeft,
    TravelRight,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::TravelLeft => Side::TravelRight,
            Side::TravelRight => Side::TravelLeft,
        }
    }
}

/// How a vertical path meets a horizontal one at a shared vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MeetingKind {
    Bounce,
    Cross,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RotationEmbedding {
    host: Digraph,
    rotation: BTreeMap<Vertex, Vec<End>>,
    surface: Surface,
    outer: Option<Dart>,
    hole: Option<Dart>,
    roles: BTreeMap<Vertex, Role>,
    face_of: BTreeMap<Dart, usize>,
    faces: Vec<Vec<Dart>>,
}

impl RotationEmbedding {
    /// Builds an embedding. Every vertex must list each of its incident
    /// edge-ends exactly once; the remaining clauses are checked by
    /// [`RotationEmbedding::validate`].
    pub fn new(
        host: Digraph,
        rotation: BTreeMap<Vertex, Vec<End>>,
        surface: Surface,
        outer: Option<Dart>,
        hole: Option<Dart>,
        roles: BTreeMap<Vertex, Role>,
    ) -> Result<Self> {
        for (&v, ends) in &rotation {
            if !host.has_vertex(v) {
                return Err(Error::UnknownVertex(v));
            }
            let mut seen = BTreeSet::new();
            for end in ends {
                let e = host.edge(end.edge).ok_or(Error::UnknownEdge(end.edge))?;
                let at = if end.at_tail { e.tail } else { e.head };
                if at != v {
                    return Err(Error::Embedding(format!("edge {} has no end at vertex {v}", end.edge)));
                }
                if !seen.insert(*end) {
                    return Err(Error::Embedding(format!("edge-end of {} repeated at vertex {v}", end.edge)));
                }
            }
            let expected = host.out_degree(v) + host.in_degree(v);
            if seen.len() != expected {
                return Err(Error::Embedding(format!(
                    "rotation at {v} lists {} of {expected} edge-ends",
                    seen.len()
                )));
            }
        }
        let mut rotation = rotation;
        for v in host.vertices() {
            let deg = host.out_degree(v) + host.in_degree(v);
            if let std::collections::btree_map::Entry::Vacant(e) = rotation.entry(v) {
                if deg > 0 {
                    return Err(Error::Embedding(format!("no rotation for vertex {v}")));
                }
                e.insert(Vec::new());
            }
        }
        for d in [outer, hole].into_iter().flatten() {
            if !host.has_edge(d.edge) {
                return Err(Error::UnknownEdge(d.edge));
            }
        }
        for &v in roles.keys() {
            if !host.has_vertex(v) {
                return Err(Error::UnknownVertex(v));
            }
        }
        let mut emb = RotationEmbedding {
            host,
            rotation,
            surface,
            outer,
            hole,
            roles,
            face_of: BTreeMap::new(),
            faces: Vec::new(),
        };
        emb.trace_faces();
        Ok(emb)
    }

    /// Embedding read off straight-line coordinates. The outer face is the
    /// face of largest signed area; in cylinder mode the hole is the bounded
    /// face of smallest area containing `hole_point`. Loops are not supported.
    pub fn from_coordinates(
        host: Digraph,
        coords: &BTreeMap<Vertex, (f64, f64)>,
        surface: Surface,
        roles: BTreeMap<Vertex, Role>,
        hole_point: Option<(f64, f64)>,
    ) -> Result<Self> {
        let mut rotation = BTreeMap::new();
        for v in host.vertices() {
            let &(x, y) = coords.get(&v).ok_or(Error::UnknownVertex(v))?;
            let mut ends: Vec<(f64, End)> = Vec::new();
            for e in host.out_edges(v).chain(host.in_edges(v)) {
                if e.is_loop() {
                    return Err(Error::LoopEdge(e.id));
                }
                let other = e.other(v).unwrap();
                let &(ox, oy) = coords.get(&other).ok_or(Error::UnknownVertex(other))?;
                ends.push((
                    (oy - y).atan2(ox - x),
                    End {
                        edge: e.id,
                        at_tail: e.tail == v,
                    },
                ));
            }
            ends.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            rotation.insert(v, ends.into_iter().map(|(_, e)| e).collect());
        }
        let mut emb = RotationEmbedding::new(host, rotation, surface, None, None, roles)?;
        let pos = |d: Dart| {
            let e = emb.host.edge(d.edge).unwrap();
            coords[&if d.forward { e.tail } else { e.head }]
        };
        let areas: Vec<f64> = emb
            .faces
            .iter()
            .map(|f| {
                f.iter()
                    .map(|&d| {
                        let (x1, y1) = pos(d);
                        let (x2, y2) = pos(d.reverse());
                        x1 * y2 - x2 * y1
                    })
                    .sum::<f64>()
                    / 2.0
            })
            .collect();
        if let Some(outer) = (0..emb.faces.len()).max_by(|&a, &b| areas[a].total_cmp(&areas[b]).then(b.cmp(&a))) {
            emb.outer = Some(emb.faces[outer][0]);
        }
        if let Some((px, py)) = hole_point {
            let mut best: Option<(f64, usize)> = None;
            for (i, f) in emb.faces.iter().enumerate() {
                if areas[i] >= 0.0 {
                    continue;
                }
                let poly: Vec<(f64, f64)> = f.iter().map(|&d| pos(d)).collect();
                if point_in_polygon((px, py), &poly) && best.is_none_or(|(a, _)| -areas[i] < a) {
                    best = Some((-areas[i], i));
                }
            }
            let (_, i) = best.ok_or_else(|| Error::Embedding("hole point lies in no bounded face".into()))?;
            emb.hole = Some(emb.faces[i][0]);
        }
        Ok(emb)
    }

    fn trace_faces(&mut self) {
        self.face_of.clear();
        self.faces.clear();
        let darts: Vec<Dart> = self
            .host
            .edge_ids()
            .flat_map(|edge| [Dart { edge, forward: true }, Dart { edge, forward: false }])
            .collect();
        for start in darts {
            if self.face_of.contains_key(&start) {
                continue;
            }
            let idx = self.faces.len();
            let mut face = Vec::new();
            let mut d = start;
            loop {
                self.face_of.insert(d, idx);
                face.push(d);
                d = self.face_successor(d);
                if d == start {
                    break;
                }
            }
            self.faces.push(face);
        }
    }

    /// The dart following `d` on the face to its right.
    pub fn face_successor(&self, d: Dart) -> Dart {
        let v = self.dart_dest(d);
        let next = self.next_ccw(v, d.dest_end());
        Dart {
            edge: next.edge,
            forward: next.at_tail,
        }
    }

    pub fn dart_origin(&self, d: Dart) -> Vertex {
        let e = self.host.edge(d.edge).expect("dart of host edge");
        if d.forward {
            e.tail
        } else {
            e.head
        }
    }

    pub fn dart_dest(&self, d: Dart) -> Vertex {
        self.dart_origin(d.reverse())
    }

    /// The edge-end after `end` in counter-clockwise order at `v`.
    pub fn next_ccw(&self, v: Vertex, end: End) -> End {
        let rot = &self.rotation[&v];
        let i = rot.iter().position(|&x| x == end).expect("end at vertex");
        rot[(i + 1) % rot.len()]
    }

    pub fn host(&self) -> &Digraph {
        &self.host
    }

    pub fn surface(&self) -> Surface {
        self.surface
    }

    pub fn rotation(&self, v: Vertex) -> &[End] {
        self.rotation.get(&v).map_or(&[], |r| r.as_slice())
    }

    pub fn rotations(&self) -> &BTreeMap<Vertex, Vec<End>> {
        &self.rotation
    }

    pub fn roles(&self) -> &BTreeMap<Vertex, Role> {
        &self.roles
    }

    pub fn role(&self, v: Vertex) -> Option<Role> {
        self.roles.get(&v).copied()
    }

    pub fn vertices_with_role(&self, role: Role) -> VertexSet {
        self.roles.iter().filter(|(_, &r)| r == role).map(|(&v, _)| v).collect()
    }

    pub fn outer_dart(&self) -> Option<Dart> {
        self.outer
    }

    pub fn hole_dart(&self) -> Option<Dart> {
        self.hole
    }

    pub fn faces(&self) -> &[Vec<Dart>] {
        &self.faces
    }

    pub fn face_of(&self, d: Dart) -> usize {
        self.face_of[&d]
    }

    pub fn outer_face(&self) -> Option<usize> {
        self.outer.map(|d| self.face_of(d))
    }

    pub fn hole_face(&self) -> Option<usize> {
        self.hole.map(|d| self.face_of(d))
    }

    /// Vertices on face `f` in traversal order (first occurrences).
    pub fn face_vertices(&self, f: usize) -> Vec<Vertex> {
        let mut seen = VertexSet::new();
        self.faces[f]
            .iter()
            .map(|&d| self.dart_origin(d))
            .filter(|v| seen.insert(*v))
            .collect()
    }

    /// Vertices on face `f`, including isolated vertices when `f` is outer.
    fn face_vertex_set(&self, f: Option<usize>) -> VertexSet {
        let mut set: VertexSet = f.map(|f| self.face_vertices(f).into_iter().collect()).unwrap_or_default();
        if f.is_some() && f == self.outer_face() || self.host.edge_count() == 0 {
            set.extend(self.host.vertices().filter(|&v| self.rotation(v).is_empty()));
        }
        set
    }

    /// Checks Euler's formula per weak component, the face markers, the
    /// boundary order and the boundary degree rules.
    pub fn validate(&self) -> Report {
        let mut report = Report::new();
        for comp in self.host.weak_components() {
            let edges: BTreeSet<EdgeId> = comp
                .iter()
                .flat_map(|&v| self.host.out_edges(v).map(|e| e.id))
                .collect();
            let faces: BTreeSet<usize> = edges
                .iter()
                .flat_map(|&edge| [Dart { edge, forward: true }, Dart { edge, forward: false }])
                .map(|d| self.face_of(d))
                .collect();
            let f = faces.len().max(1);
            let chi = comp.len() as i64 - edges.len() as i64 + f as i64;
            if chi != 2 {
                report.push(
                    "euler",
                    format!(
                        "component at {}: V - E + F = {} - {} + {} = {chi}",
                        comp.first().unwrap(),
                        comp.len(),
                        edges.len(),
                        f
                    ),
                );
            }
        }
        if self.host.edge_count() > 0 && self.outer.is_none() {
            report.push("outer-face", "no outer face marked");
        }
        match self.surface {
            Surface::Disk => self.validate_disk(&mut report),
            Surface::Cylinder => self.validate_cylinder(&mut report),
        }
        report
    }

    fn validate_disk(&self, report: &mut Report) {
        if self.hole.is_some() {
            report.push("hole-face", "disk embedding has a hole marker");
        }
        let count = |r| self.roles.values().filter(|&&x| x == r).count();
        if count(Role::T) != count(Role::B) || count(Role::L) != count(Role::R) {
            report.push(
                "role-count",
                format!(
                    "|T|={} |B|={} |L|={} |R|={}",
                    count(Role::T),
                    count(Role::B),
                    count(Role::L),
                    count(Role::R)
                ),
            );
        }
        for (&v, &r) in &self.roles {
            let (inn, out) = (self.host.in_degree(v), self.host.out_degree(v));
            let ok = match r {
                Role::B | Role::R => inn == 0 && out == 1,
                Role::T | Role::L => inn == 1 && out == 0,
            };
            if !ok {
                report.push("boundary-degree", format!("vertex {v} in {r} has in {inn}, out {out}"));
            }
        }
        let outer = self.face_vertex_set(self.outer_face());
        let order: Vec<Vertex> = match self.outer_face() {
            Some(f) => self.face_vertices(f),
            None => outer.iter().copied().collect(),
        };
        for (&v, r) in &self.roles {
            if !outer.contains(&v) {
                report.push("boundary-face", format!("vertex {v} in {r} is not on the outer face"));
            }
        }
        let labels: Vec<Role> = order.iter().filter_map(|v| self.role(*v)).collect();
        if !cyclic_blocks_in_order(&labels, &[Role::T, Role::L, Role::B, Role::R]) {
            let text: Vec<String> = labels.iter().map(|r| r.to_string()).collect();
            report.push(
                "boundary-order",
                format!("counter-clockwise boundary reads {}", text.join(" ")),
            );
        }
    }

    fn validate_cylinder(&self, report: &mut Report) {
        if self.hole.is_none() {
            report.push("hole-face", "cylinder embedding has no hole marker");
        }
        if self.hole.is_some() && self.hole_face() == self.outer_face() {
            report.push("hole-face", "hole and outer markers name the same face");
        }
        let count = |r| self.roles.values().filter(|&&x| x == r).count();
        if count(Role::T) != count(Role::B) {
            report.push("role-count", format!("|T|={} |B|={}", count(Role::T), count(Role::B)));
        }
        for (&v, &r) in &self.roles {
            let (inn, out) = (self.host.in_degree(v), self.host.out_degree(v));
            let ok = match r {
                Role::T => inn == 0 && out == 1,
                Role::B => inn == 1 && out == 0,
                _ => false,
            };
            if !ok {
                report.push("boundary-degree", format!("vertex {v} in {r} has in {inn}, out {out}"));
            }
        }
        let outer = self.face_vertex_set(self.outer_face());
        let hole = self.face_vertex_set(self.hole_face());
        let t = self.vertices_with_role(Role::T);
        let b = self.vertices_with_role(Role::B);
        let fits = |x: &VertexSet, y: &VertexSet| x.is_subset(&outer) && y.is_subset(&hole);
        if !fits(&t, &b) && !fits(&b, &t) {
            report.push("boundary-face", "T and B do not lie on the two marked faces");
        }
    }

    /// Side of the edge-end `end` at the vertex with index `i` on `path`.
    /// Ends of a path (not a circuit) have no sides.
    pub fn side_of_end(&self, path: &DirectedPath, i: usize, end: End) -> Result<Side> {
        let v = path.vertices()[i];
        let (Some(ein), Some(eout)) = (path.in_edge_at(i), path.out_edge_at(i)) else {
            return Err(Error::Embedding(format!("vertex {v} is an end of the path; sides are undefined")));
        };
        let in_end = End {
            edge: ein,
            at_tail: false,
        };
        let out_end = End {
            edge: eout,
            at_tail: true,
        };
        if end == in_end || end == out_end {
            return Err(Error::Embedding(format!("edge {} lies on the path at {v}", end.edge)));
        }
        let rot = &self.rotation[&v];
        let n = rot.len();
        let pin = rot.iter().position(|&x| x == in_end).expect("in-end at vertex");
        let mut k = (pin + 1) % n;
        while rot[k] != out_end {
            if rot[k] == end {
                return Ok(Side::TravelRight);
            }
            k = (k + 1) % n;
        }
        Ok(Side::TravelLeft)
    }

    /// Bounce or cross of vertical `q` against horizontal `p` at `u`.
    pub fn classify_meeting(&self, p: &DirectedPath, q: &DirectedPath, u: Vertex) -> Result<MeetingKind> {
        let ip = p
            .position(u)
            .ok_or_else(|| Error::Embedding(format!("vertex {u} is not on the horizontal path")))?;
        let iq = q
            .position(u)
            .ok_or_else(|| Error::Embedding(format!("vertex {u} is not on the vertical path")))?;
        let (Some(qin), Some(qout)) = (q.in_edge_at(iq), q.out_edge_at(iq)) else {
            return Err(Error::Embedding(format!("vertex {u} is an end of the vertical path")));
        };
        let a = self.side_of_end(p, ip, End { edge: qin, at_tail: false })?;
        let b = self.side_of_end(p, ip, End { edge: qout, at_tail: true })?;
        Ok(if a == b { MeetingKind::Bounce } else { MeetingKind::Cross })
    }

    /// Side of every vertex off `curve`, read from how its component of
    /// `G - V(curve)` attaches to the curve. Components that attach only at
    /// the curve's ends take their side from `fallback` applied to their
    /// boundary roles; components with no usable information are omitted.
    pub fn curve_sides(
        &self,
        curve: &DirectedPath,
        fallback: &dyn Fn(Role) -> Option<Side>,
    ) -> Result<BTreeMap<Vertex, Side>> {
        let on_curve = curve.vertex_set();
        let rest = self.host.without(&on_curve);
        let mut sides = BTreeMap::new();
        let circuit_len = if curve.is_circuit() { curve.len() } else { usize::MAX };
        for comp in rest.weak_components() {
            let mut side: Option<Side> = None;
            for &x in &comp {
                for e in self.host.out_edges(x).chain(self.host.in_edges(x)) {
                    let Some(y) = e.other(x) else { continue };
                    if !on_curve.contains(&y) {
                        continue;
                    }
                    let i = curve.position(y).unwrap();
                    let i = if i == circuit_len { 0 } else { i };
                    let end = End {
                        edge: e.id,
                        at_tail: e.tail == y,
                    };
                    match self.side_of_end(curve, i, end) {
                        Ok(s) => match side {
                            None => side = Some(s),
                            Some(t) if t != s => {
                                return Err(Error::Embedding(format!(
                                    "component at {} touches both sides of the curve",
                                    comp.first().unwrap()
                                )))
                            }
                            _ => {}
                        },
                        Err(_) => continue,
                    }
                }
            }
            if side.is_none() {
                for &x in &comp {
                    if let Some(s) = self.role(x).and_then(fallback) {
                        if side.is_some_and(|t| t != s) {
                            return Err(Error::Embedding("boundary roles on both sides".into()));
                        }
                        side = Some(s);
                    }
                }
            }
            if let Some(s) = side {
                for &x in &comp {
                    sides.insert(x, s);
                }
            }
        }
        Ok(sides)
    }

    fn vertical_sides(&self, curve: &DirectedPath) -> Result<BTreeMap<Vertex, Side>> {
        let fallback = |r: Role| match r {
            Role::R => Some(Side::TravelRight),
            Role::L => Some(Side::TravelLeft),
            _ => None,
        };
        let sides = self.curve_sides(curve, &fallback)?;
        for (&v, &r) in &self.roles {
            let want = match r {
                Role::L => Side::TravelLeft,
                Role::R => Side::TravelRight,
                _ => continue,
            };
            if sides.get(&v).is_some_and(|&s| s != want) || curve.contains(v) {
                return Err(Error::Embedding(format!("curve does not separate L from R at vertex {v}")));
            }
        }
        Ok(sides)
    }

    fn horizontal_sides(&self, curve: &DirectedPath) -> Result<BTreeMap<Vertex, Side>> {
        let fallback = |r: Role| match r {
            Role::T => Some(Side::TravelRight),
            Role::B => Some(Side::TravelLeft),
            _ => None,
        };
        let sides = self.curve_sides(curve, &fallback)?;
        for (&v, &r) in &self.roles {
            let want = match r {
                Role::B => Side::TravelLeft,
                Role::T => Side::TravelRight,
                _ => continue,
            };
            if sides.get(&v).is_some_and(|&s| s != want) || curve.contains(v) {
                return Err(Error::Embedding(format!("curve does not separate T from B at vertex {v}")));
            }
        }
        Ok(sides)
    }

    fn order_by_sides(
        &self,
        curves: &[DirectedPath],
        sides: impl Fn(&DirectedPath) -> Result<BTreeMap<Vertex, Side>>,
    ) -> Result<Vec<usize>> {
        let n = curves.len();
        if !crate::digraph::pairwise_disjoint(curves) {
            return Err(Error::Embedding("curves are not vertex-disjoint".into()));
        }
        let maps: Vec<_> = curves.iter().map(&sides).collect::<Result<_>>()?;
        // before[i][j]: curve i lies on the first side of curve j
        let mut before = vec![vec![false; n]; n];
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let s = maps[j].get(&curves[i].start()).copied().ok_or_else(|| {
                    Error::Embedding(format!("curve {i} has no side relative to curve {j}"))
                })?;
                before[i][j] = s == Side::TravelLeft;
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if before[i][j] == before[j][i] {
                    return Err(Error::Embedding(format!("curves {i} and {j} are not ordered")));
                }
            }
        }
        let mut idx: Vec<usize> = (0..n).collect();
        idx.sort_by_key(|&i| (0..n).filter(|&j| before[j][i]).count());
        for w in idx.windows(2) {
            if !before[w[0]][w[1]] {
                return Err(Error::Embedding("curve order is not transitive".into()));
            }
        }
        Ok(idx)
    }

    /// Indices of L-R separating curves (directed `B` to `T`) sorted left to right.
    pub fn left_right_order(&self, curves: &[DirectedPath]) -> Result<Vec<usize>> {
        self.order_by_sides(curves, |c| self.vertical_sides(c))
    }

    /// Indices of T-B separating curves (directed `R` to `L`) sorted bottom to top.
    pub fn bottom_top_order(&self, curves: &[DirectedPath]) -> Result<Vec<usize>> {
        self.order_by_sides(curves, |c| self.horizontal_sides(c))
    }

    /// Vertices on `vertical` or to its left.
    pub fn left_region(&self, vertical: &DirectedPath) -> Result<VertexSet> {
        let sides = self.vertical_sides(vertical)?;
        Ok(self
            .host
            .vertices()
            .filter(|v| vertical.contains(*v) || sides.get(v) == Some(&Side::TravelLeft))
            .collect())
    }

    /// Vertices on `horizontal` or below it.
    pub fn below_region(&self, horizontal: &DirectedPath) -> Result<VertexSet> {
        let sides = self.horizontal_sides(horizontal)?;
        Ok(self
            .host
            .vertices()
            .filter(|v| horizontal.contains(*v) || sides.get(v) == Some(&Side::TravelLeft))
            .collect())
    }

    /// True when every vertex of `vertices` lies on `vertical` or to its left.
    pub fn weakly_left_of(&self, vertices: &VertexSet, vertical: &DirectedPath) -> Result<bool> {
        let sides = self.vertical_sides(vertical)?;
        Ok(vertices
            .iter()
            .all(|v| vertical.contains(*v) || sides.get(v) == Some(&Side::TravelLeft)))
    }

    /// True when every vertex of `vertices` lies on `horizontal` or below it.
    pub fn weakly_below(&self, vertices: &VertexSet, horizontal: &DirectedPath) -> Result<bool> {
        let sides = self.horizontal_sides(horizontal)?;
        Ok(vertices
            .iter()
            .all(|v| horizontal.contains(*v) || sides.get(v) == Some(&Side::TravelLeft)))
    }

    /// Shortest sequence of darts crossed by a dual path from the hole face
    /// to the outer face. Each dart is oriented so that the hole side lies on
    /// its left.
    fn dual_cut(&self) -> Result<Vec<Dart>> {
        let (Some(hole), Some(outer)) = (self.hole_face(), self.outer_face()) else {
            return Err(Error::Embedding("winding needs hole and outer markers".into()));
        };
        let mut prev: BTreeMap<usize, Dart> = BTreeMap::new();
        let mut seen = BTreeSet::from([hole]);
        let mut queue = VecDeque::from([hole]);
        while let Some(f) = queue.pop_front() {
            if f == outer {
                break;
            }
            for &d in &self.faces[f] {
                let g = self.face_of(d.reverse());
                if seen.insert(g) {
                    // d has f on its right; the reverse dart has g on its right
                    // and f on its left
                    prev.insert(g, d.reverse());
                    queue.push_back(g);
                }
            }
        }
        if !seen.contains(&outer) {
            return Err(Error::Embedding("hole and outer faces are not connected".into()));
        }
        let mut cut = Vec::new();
        let mut f = outer;
        while f != hole {
            let d = prev[&f];
            cut.push(d);
            f = self.face_of(d.reverse());
        }
        cut.reverse();
        Ok(cut)
    }

    /// Winding number of a circuit around the hole: +1 for a circuit with
    /// the hole on its left (counter-clockwise), -1 for clockwise, 0 when it
    /// does not separate the two boundaries.
    pub fn winding(&self, circuit: &DirectedPath) -> Result<i32> {
        if !circuit.is_circuit() {
            return Err(Error::InvalidPath("winding needs a circuit".into()));
        }
        let cut = self.dual_cut()?;
        let mut w = 0;
        for (i, &e) in circuit.edges().iter().enumerate() {
            let forward = self.host.edge(e).unwrap().tail == circuit.vertices()[i];
            let d = Dart { edge: e, forward };
            for &c in &cut {
                if c == d {
                    w += 1;
                } else if c == d.reverse() {
                    w -= 1;
                }
            }
        }
        Ok(w)
    }

    /// Winding contribution of traversing each edge from tail to head; the
    /// winding of a closed walk is the sum over its edges.
    pub fn edge_windings(&self) -> Result<BTreeMap<EdgeId, i32>> {
        let mut out = BTreeMap::new();
        for d in self.dual_cut()? {
            *out.entry(d.edge).or_insert(0) += if d.forward { 1 } else { -1 };
        }
        out.retain(|_, w| *w != 0);
        Ok(out)
    }

    /// Indices of disjoint counter-clockwise circuits around the hole,
    /// innermost first.
    pub fn nesting_order(&self, circuits: &[DirectedPath]) -> Result<Vec<usize>> {
        for (i, c) in circuits.iter().enumerate() {
            if self.winding(c)? != 1 {
                return Err(Error::Embedding(format!("circuit {i} does not wind counter-clockwise")));
            }
        }
        self.order_by_sides(circuits, |c| self.curve_sides(c, &|_| None))
    }

    /// The embedding with every rotation reversed and `T`/`B` exchanged.
    pub fn mirrored(&self) -> RotationEmbedding {
        let rotation = self
            .rotation
            .iter()
            .map(|(&v, r)| (v, r.iter().rev().copied().collect()))
            .collect();
        let roles = self
            .roles
            .iter()
            .map(|(&v, &r)| {
                let r = match r {
                    Role::T => Role::B,
                    Role::B => Role::T,
                    x => x,
                };
                (v, r)
            })
            .collect();
        let mut m = RotationEmbedding::new(self.host.clone(), rotation, self.surface, None, None, roles)
            .expect("mirroring keeps a consistent rotation");
        // face to the right of a dart becomes the face to the right of its reverse
        m.outer = self.outer.map(Dart::reverse);
        m.hole = self.hole.map(Dart::reverse);
        m
    }

    fn surviving_marker(&self, marker: Option<Dart>, host: &Digraph) -> Option<Dart> {
        let d = marker?;
        let face = &self.faces[self.face_of(d)];
        let i = face.iter().position(|&x| x == d).unwrap();
        (0..face.len())
            .map(|k| face[(i + k) % face.len()])
            .find(|x| host.has_edge(x.edge))
    }

    fn rebuild(&self, host: Digraph, rotation: BTreeMap<Vertex, Vec<End>>, roles: BTreeMap<Vertex, Role>) -> Result<Self> {
        let outer = self.surviving_marker(self.outer, &host);
        let hole = self.surviving_marker(self.hole, &host);
        RotationEmbedding::new(host, rotation, self.surface, outer, hole, roles)
    }

    pub fn delete_edge(&self, e: EdgeId) -> Result<Self> {
        let mut host = self.host.clone();
        host.remove_edge(e)?;
        let rotation = self
            .rotation
            .iter()
            .map(|(&v, r)| (v, r.iter().copied().filter(|x| x.edge != e).collect()))
            .collect();
        self.rebuild(host, rotation, self.roles.clone())
    }

    pub fn delete_vertex(&self, v: Vertex) -> Result<Self> {
        let mut host = self.host.clone();
        host.remove_vertex(v)?;
        let rotation = self
            .rotation
            .iter()
            .filter(|(&u, _)| u != v)
            .map(|(&u, r)| (u, r.iter().copied().filter(|x| host.has_edge(x.edge)).collect()))
            .collect();
        let mut roles = self.roles.clone();
        roles.remove(&v);
        self.rebuild(host, rotation, roles)
    }

    /// Contracts `e` (not a loop) into the smaller of its two ends. Loops
    /// produced by the merge are deleted; parallel edges are kept. The
    /// butterfly condition is the caller's concern.
    pub fn contract_edge(&self, e: EdgeId) -> Result<Self> {
        let edge = *self.host.edge(e).ok_or(Error::UnknownEdge(e))?;
        if edge.is_loop() {
            return Err(Error::LoopEdge(e));
        }
        let (u, v) = (edge.tail, edge.head);
        let keep = u.min(v);
        let gone = u.max(v);
        let after = |w: Vertex, end: End| -> Vec<End> {
            let r = &self.rotation[&w];
            let i = r.iter().position(|&x| x == end).unwrap();
            (1..r.len()).map(|k| r[(i + k) % r.len()]).collect()
        };
        let mut merged = after(u, End { edge: e, at_tail: true });
        merged.extend(after(v, End { edge: e, at_tail: false }));
        let (host, dropped) = crate::minors::merge_edge(&self.host, e)?;
        let mut rotation = BTreeMap::new();
        for (&w, r) in &self.rotation {
            if w == u || w == v {
                continue;
            }
            rotation.insert(w, r.clone());
        }
        rotation.insert(keep, merged.into_iter().filter(|x| !dropped.contains(&x.edge)).collect());
        let mut roles = self.roles.clone();
        if let Some(r) = roles.remove(&gone) {
            roles.entry(keep).or_insert(r);
        }
        self.rebuild(host, rotation, roles)
    }

    /// Restriction to a subdigraph: edges and vertices not in `sub` are deleted.
    pub fn restrict(&self, sub: &Digraph) -> Result<Self> {
        let host = self.host.subgraph(sub.vertex_set(), &sub.edge_ids().collect::<Vec<_>>())?;
        let rotation = self
            .rotation
            .iter()
            .filter(|(w, _)| host.has_vertex(**w))
            .map(|(&w, r)| (w, r.iter().copied().filter(|x| host.has_edge(x.edge)).collect()))
            .collect();
        let roles = self
            .roles
            .iter()
            .filter(|(w, _)| host.has_vertex(**w))
            .map(|(&w, &r)| (w, r))
            .collect();
        self.rebuild(host, rotation, roles)
    }

    /// Same embedding with a different role assignment.
    pub fn with_roles(&self, roles: BTreeMap<Vertex, Role>) -> Result<Self> {
        RotationEmbedding::new(self.host.clone(), self.rotation.clone(), self.surface, self.outer, self.hole, roles)
    }

    /// Same embedding with the face markers replaced.
    pub fn with_markers(&self, outer: Option<Dart>, hole: Option<Dart>) -> Result<Self> {
        RotationEmbedding::new(self.host.clone(), self.rotation.clone(), self.surface, outer, hole, self.roles.clone())
    }
}

fn point_in_polygon((px, py): (f64, f64), poly: &[(f64, f64)]) -> bool {
    let mut inside = false;
    let n = poly.len();
    for i in 0..n {
        let (x1, y1) = poly[i];
        let (x2, y2) = poly[(i + 1) % n];
        if (y1 > py) != (y2 > py) && px < x1 + (py - y1) / (y2 - y1) * (x2 - x1) {
            inside = !inside;
        }
    }
    inside
}

/// True when `labels`, read cyclically, consists of contiguous blocks whose
/// order follows the cyclic order `pattern` (absent labels allowed).
fn cyclic_blocks_in_order(labels: &[Role], pattern: &[Role]) -> bool {
    if labels.is_empty() {
        return true;
    }
    let mut blocks: Vec<Role> = Vec::new();
    for &l in labels {
        if blocks.last() != Some(&l) {
            blocks.push(l);
        }
    }
    if blocks.len() > 1 && blocks.first() == blocks.last() {
        blocks.pop();
    }
    let distinct: BTreeSet<Role> = blocks.iter().copied().collect();
    if distinct.len() != blocks.len() {
        return false;
    }
    let rank = |r: Role| pattern.iter().position(|&x| x == r).unwrap();
    let start = (0..blocks.len()).min_by_key(|&i| rank(blocks[i])).unwrap();
    let rotated: Vec<usize> = (0..blocks.len()).map(|k| rank(blocks[(start + k) % blocks.len()])).collect();
    rotated.windows(2).all(|w| w[0] < w[1])
}
