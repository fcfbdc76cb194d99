//! Fixtures, generators and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeSet, VecDeque};

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;
use sperner_core::complex::{Complex, Face};
use sperner_core::maps::NonnegGrid;
use sperner_core::partition::{is_face, Partition};
use sperner_core::solver::{compositions, SizeVector};

pub fn part(v: &[u32]) -> Partition {
    Partition::new(v.to_vec()).unwrap()
}

/// The eight cube vertices of the four-interval example, in the listed order.
pub fn cube_vertices(r: u32) -> Vec<Partition> {
    [
        [0, 1, 2, 3],
        [0, 1, 2, 2],
        [0, 1, 1, 2],
        [0, 0, 1, 2],
        [0, 1, 1, 1],
        [0, 0, 1, 1],
        [0, 0, 0, 1],
        [0, 0, 0, 0],
    ]
    .iter()
    .map(|p| part(&[p[0], p[1], p[2], p[3], r]))
    .collect()
}

pub fn cube_diagonal(r: u32) -> Face<Partition> {
    [part(&[0, 0, 1, 1, r]), part(&[0, 1, 1, 2, r])].into()
}

/// The four named vertices of the path example with `r = 2s + 1`, in the
/// listed order.
pub fn path_tetrahedron(s: u32) -> Vec<Partition> {
    let r = 2 * s + 1;
    vec![
        part(&[0, 0, 0, s + 1, r]),
        part(&[0, 0, 0, s, r]),
        part(&[0, 1, 1, s + 1, r]),
        part(&[0, 0, 1, s + 1, r]),
    ]
}

/// Every subset of `vertices` accepted by the pairwise face predicate.
pub fn brute_force_faces(vertices: &[Partition]) -> BTreeSet<Face<Partition>> {
    assert!(vertices.len() <= 20, "subset oracle is exponential");
    let mut out = BTreeSet::new();
    for mask in 0u32..(1 << vertices.len()) {
        let subset: Vec<&Partition> =
            (0..vertices.len()).filter(|i| mask >> i & 1 == 1).map(|i| &vertices[i]).collect();
        if is_face(subset.iter().copied()).unwrap() {
            out.insert(subset.into_iter().cloned().collect());
        }
    }
    out
}

/// Maximal members of a face family, by pairwise comparison.
pub fn maximal(faces: &BTreeSet<Face<Partition>>) -> BTreeSet<Face<Partition>> {
    faces
        .iter()
        .filter(|f| !faces.iter().any(|g| g.len() > f.len() && f.is_subset(g)))
        .cloned()
        .collect()
}

/// A random complex on vertices `0..k` generated by a few random faces.
pub fn random_complex<R: Rng>(k: u8, rng: &mut R) -> Complex<u8> {
    let generators = rng.random_range(0..=4);
    let faces: Vec<Face<u8>> = (0..generators)
        .map(|_| (0..k).filter(|_| rng.random_bool(0.5)).collect())
        .collect();
    Complex::close_down(faces)
}

/// Subsets of `V × W` whose two projections are faces, by enumeration.
pub fn join_count_oracle(a: &Complex<u8>, b: &Complex<u8>) -> usize {
    let pairs: Vec<(u8, u8)> = a
        .vertices()
        .iter()
        .flat_map(|&v| b.vertices().iter().map(move |&w| (v, w)))
        .collect();
    assert!(pairs.len() <= 16);
    (0u32..(1 << pairs.len()))
        .filter(|mask| {
            let chosen = (0..pairs.len()).filter(|i| mask >> i & 1 == 1).map(|i| pairs[i]);
            let (left, right): (BTreeSet<u8>, BTreeSet<u8>) = chosen.unzip();
            a.contains(&left) && b.contains(&right)
        })
        .count()
}

/// Subsets of the vertex set of `k` that are faces with at most `m` vertices.
pub fn skeleton_count_oracle(k: &Complex<u8>, m: usize) -> usize {
    let vs: Vec<u8> = k.vertices().iter().copied().collect();
    (0u32..(1 << vs.len()))
        .filter(|mask| {
            let s: BTreeSet<u8> = (0..vs.len()).filter(|i| mask >> i & 1 == 1).map(|i| vs[i]).collect();
            s.len() <= m && k.contains(&s)
        })
        .count()
}

/// Breadth-first reachability on the color/edge incidence graph.
pub fn connected_oracle(colors: &BTreeSet<usize>, edges: &[BTreeSet<usize>]) -> bool {
    let covered: BTreeSet<usize> = edges.iter().flatten().copied().collect();
    if &covered != colors {
        return false;
    }
    // Nodes: colors as Left(c), edges as Right(e).
    let nodes = colors.len() + edges.len();
    if nodes == 0 {
        return true;
    }
    let color_list: Vec<usize> = colors.iter().copied().collect();
    let mut seen = vec![false; nodes];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    while let Some(node) = queue.pop_front() {
        let neighbours: Vec<usize> = if node < color_list.len() {
            let c = color_list[node];
            (0..edges.len()).filter(|&e| edges[e].contains(&c)).map(|e| color_list.len() + e).collect()
        } else {
            edges[node - color_list.len()]
                .iter()
                .map(|c| color_list.iter().position(|x| x == c).unwrap())
                .collect()
        };
        for next in neighbours {
            if !seen[next] {
                seen[next] = true;
                queue.push_back(next);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

pub fn random_sizes<R: Rng>(colors: usize, indices: usize, rng: &mut R) -> SizeVector {
    compositions(colors - 1, indices).choose(rng).unwrap().clone()
}

fn random_row<R: Rng>(colors: usize, support: usize, mass: f64, rng: &mut R) -> Vec<f64> {
    let mut row = vec![0.0; colors];
    if support == 0 {
        return row;
    }
    let mut slots: Vec<usize> = (0..colors).collect();
    slots.shuffle(rng);
    let raw: Vec<f64> = (0..support).map(|_| rng.random_range(0.01..1.0)).collect();
    let total: f64 = raw.iter().sum();
    for (slot, w) in slots.iter().zip(raw) {
        row[*slot] = mass * w / total;
    }
    row
}

/// A random point of `Y`: rows with support at most `m_i`, total mass one.
pub fn random_y<R: Rng>(colors: usize, m: &SizeVector, rng: &mut R) -> NonnegGrid {
    loop {
        let rows: Vec<Vec<f64>> = m
            .as_slice()
            .iter()
            .map(|&mi| {
                let support = rng.random_range(0..=mi.min(colors));
                random_row(colors, support, rng.random_range(0.05..1.0), rng)
            })
            .collect();
        let total: f64 = rows.iter().flatten().sum();
        if total > 0.0 {
            let rows: Vec<Vec<f64>> =
                rows.into_iter().map(|r| r.into_iter().map(|v| v / total).collect()).collect();
            return NonnegGrid::from_rows(&rows).unwrap();
        }
    }
}

/// A random point of `X`: stochastic rows, one of them with support at most
/// `m_i`. Needs some `m_i >= 1`.
pub fn random_x<R: Rng>(colors: usize, m: &SizeVector, rng: &mut R) -> NonnegGrid {
    let small: Vec<usize> = (0..m.len()).filter(|&i| m.get(i) >= 1).collect();
    let forced = *small.choose(rng).expect("some m_i >= 1");
    let rows: Vec<Vec<f64>> = (0..m.len())
        .map(|i| {
            let cap = if i == forced { m.get(i).min(colors) } else { colors };
            let support = rng.random_range(1..=cap);
            random_row(colors, support, 1.0, rng)
        })
        .collect();
    NonnegGrid::from_rows(&rows).unwrap()
}
