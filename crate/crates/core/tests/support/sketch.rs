use std::collections::BTreeMap;

use cylgrid::embedding::{Role, RotationEmbedding, Surface};
use cylgrid::rerouting::RoutedSystem;
use cylgrid::{Digraph, DirectedPath, Vertex};

/// Point-and-path sketch of a disk system.
#[derive(Default)]
pub struct Sketch {
    ids: BTreeMap<(i64, i64), Vertex>,
    coords: BTreeMap<Vertex, (f64, f64)>,
    arcs: Vec<(Vertex, Vertex)>,
    roles: BTreeMap<Vertex, Role>,
    verticals: Vec<Vec<Vertex>>,
    horizontals: Vec<Vec<Vertex>>,
}

impl Sketch {
    pub fn pt(&mut self, x: f64, y: f64) -> Vertex {
        let key = ((x * 1000.0).round() as i64, (y * 1000.0).round() as i64);
        let next = self.ids.len();
        let id = *self.ids.entry(key).or_insert(next);
        self.coords.insert(id, (x, y));
        id
    }

    pub fn chain(&mut self, pts: &[(f64, f64)]) -> Vec<Vertex> {
        let vs: Vec<Vertex> = pts.iter().map(|&(x, y)| self.pt(x, y)).collect();
        for w in vs.windows(2) {
            if !self.arcs.contains(&(w[0], w[1])) {
                self.arcs.push((w[0], w[1]));
            }
        }
        vs
    }

    pub fn vertical(&mut self, pts: &[(f64, f64)]) {
        let vs = self.chain(pts);
        self.roles.insert(vs[0], Role::B);
        self.roles.insert(*vs.last().unwrap(), Role::T);
        self.verticals.push(vs);
    }

    pub fn horizontal(&mut self, pts: &[(f64, f64)]) {
        let vs = self.chain(pts);
        self.roles.insert(vs[0], Role::R);
        self.roles.insert(*vs.last().unwrap(), Role::L);
        self.horizontals.push(vs);
    }

    pub fn build(self) -> Fixture {
        let d = Digraph::from_edges(self.ids.len(), &self.arcs);
        let emb = RotationEmbedding::from_coordinates(d, &self.coords, Surface::Disk, self.roles, None).unwrap();
        let path = |vs: &Vec<Vertex>| DirectedPath::from_vertices(emb.host(), vs).unwrap();
        let sys = RoutedSystem {
            verticals: self.verticals.iter().map(path).collect(),
            horizontals: self.horizontals.iter().map(path).collect(),
            embedding: emb.clone(),
        };
        assert!(sys.validate().is_valid(), "{}", sys.validate());
        Fixture { sys, coords: self.coords }
    }
}

pub struct Fixture {
    pub sys: RoutedSystem,
    pub coords: BTreeMap<Vertex, (f64, f64)>,
}

pub fn row(xs: &[f64], y: f64) -> Vec<(f64, f64)> {
    xs.iter().map(|&x| (x, y)).collect()
}

/// Straight verticals up and straight horizontals leftwards.
pub fn canonical(cols: usize, rows: usize) -> Fixture {
    let mut s = Sketch::default();
    for x in 1..=cols {
        let pts: Vec<_> = (0..=rows + 1).map(|y| (x as f64, y as f64)).collect();
        s.vertical(&pts);
    }
    for y in 1..=rows {
        let pts: Vec<_> = (0..=cols + 1).rev().map(|x| (x as f64, y as f64)).collect();
        s.horizontal(&pts);
    }
    s.build()
}

/// Two verticals on `h` horizontals. Each vertical arrives on a horizontal
/// left of where it departs; the right one bubbles back below the
/// horizontal, the left one above. All departures precede all arrivals.
pub fn segregated(h: usize) -> Fixture {
    let mut s = Sketch::default();
    let top = h as f64 + 1.0;
    let mut right = vec![(4.0, 0.0)];
    let mut left = vec![(3.0, 0.0)];
    for j in 1..=h {
        let y = j as f64;
        right.extend([(2.0, y), (2.5, y - 0.1), (3.5, y - 0.1), (4.0, y)]);
        left.extend([(1.0, y), (1.5, y + 0.1), (2.5, y + 0.1), (3.0, y)]);
    }
    left.push((1.0, top));
    right.push((2.0, top));
    s.vertical(&left);
    s.vertical(&right);
    for j in 1..=h {
        s.horizontal(&row(&[5.0, 4.0, 3.0, 2.0, 1.0, 0.0], j as f64));
    }
    s.build()
}

/// `k` verticals on `h` horizontals, each bubbling back below a horizontal
/// inside its own stretch of it.
pub fn bubbly(k: usize, h: usize) -> Fixture {
    let mut s = Sketch::default();
    for i in 1..=k {
        let l = 3.0 * i as f64 - 2.0;
        let mut pts = vec![(l + 1.0, 0.0)];
        for j in 1..=h {
            let y = j as f64;
            pts.extend([(l, y), (l + 0.33, y - 0.15), (l + 0.66, y - 0.15), (l + 1.0, y)]);
        }
        pts.push((l, h as f64 + 1.0));
        s.vertical(&pts);
    }
    let mut xs = vec![3.0 * k as f64 + 1.0];
    for i in (1..=k).rev() {
        xs.extend([3.0 * i as f64 - 1.0, 3.0 * i as f64 - 2.0]);
    }
    xs.push(0.0);
    for j in 1..=h {
        s.horizontal(&row(&xs, j as f64));
    }
    s.build()
}

/// Four side-by-side pairs of interleaved verticals on two horizontals, the
/// left of each pair looping above the top horizontal and the right one
/// below it, plus one straight vertical on the far right.
pub fn nine_mixed() -> Fixture {
    let mut s = Sketch::default();
    for p in 0..4 {
        let x = 5.0 * p as f64;
        s.vertical(&[(x + 1.0, 0.0), (x + 1.0, 1.0), (x + 1.0, 2.0), (x + 1.5, 2.1), (x + 2.5, 2.1), (x + 3.0, 2.0), (x + 3.0, 3.0)]);
        s.vertical(&[(x + 2.0, 0.0), (x + 2.0, 1.0), (x + 2.0, 2.0), (x + 2.5, 1.9), (x + 3.5, 1.9), (x + 4.0, 2.0), (x + 4.0, 3.0)]);
    }
    s.vertical(&[(21.0, 0.0), (21.0, 1.0), (21.0, 2.0), (21.0, 3.0)]);
    let mut low = vec![22.0, 21.0];
    let mut high = vec![22.0, 21.0];
    for p in (0..4).rev() {
        let x = 5.0 * p as f64;
        low.extend([x + 2.0, x + 1.0]);
        high.extend([x + 4.0, x + 3.0, x + 2.0, x + 1.0]);
    }
    low.push(0.0);
    high.push(0.0);
    s.horizontal(&row(&low, 1.0));
    s.horizontal(&row(&high, 2.0));
    s.build()
}

pub fn integrated() -> Fixture {
    bubbly(4, 2)
}

/// One vertical zig-zags four times between two horizontals; a second runs
/// straight up to their right.
pub fn zigzag() -> Fixture {
    let mut s = Sketch::default();
    s.vertical(&[
        (0.5, 0.0),
        (1.0, 1.0),
        (1.5, 2.0),
        (2.0, 1.0),
        (2.5, 2.0),
        (3.0, 1.0),
        (3.5, 2.0),
        (4.0, 1.0),
        (4.5, 2.0),
        (4.5, 3.0),
    ]);
    s.vertical(&[(6.0, 0.0), (6.0, 1.0), (6.0, 2.0), (6.0, 3.0)]);
    s.horizontal(&row(&[7.0, 6.0, 4.0, 3.0, 2.0, 1.0, 0.0], 1.0));
    s.horizontal(&row(&[7.0, 6.0, 4.5, 3.5, 2.5, 1.5, 0.0], 2.0));
    s.build()
}
