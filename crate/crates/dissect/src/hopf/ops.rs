//! The operations q_C, r_C and the flipped-chord set K_C.

use super::HopfError;
use crate::decoration::{DecoratedDiagram, DecoratedGraph, Edge, EdgeTag};
use crate::diagram::{faces, orient_tree, s_c_plus, DissectionDiagram};
use std::collections::{BTreeMap, BTreeSet};

/// One factor q_C^α(D) with its labeling data.
#[derive(Clone, Debug)]
pub struct QFace {
    pub diagram: DecoratedDiagram,
    /// Sides of the face in increasing order; new vertex/side j is `sides[j]`.
    pub sides: Vec<usize>,
    /// Original chord label of new chord j, at index j-1.
    pub chords: Vec<usize>,
    /// Chords whose direction had to be reversed (expected to be zero).
    pub flips: usize,
}

/// Result of r_C(D).
#[derive(Clone, Debug)]
pub struct FlipReport {
    pub diagram: DecoratedDiagram,
    /// K_C(D), by original chord label.
    pub flipped: BTreeSet<usize>,
    pub k: usize,
    /// Original chord label of new chord j, at index j-1.
    pub chords: Vec<usize>,
    /// Sides kept, in increasing order; new side j is `sides[j]`.
    pub sides: Vec<usize>,
}

fn check_subset(dd: &DecoratedDiagram, c: &BTreeSet<usize>) -> Result<(), HopfError> {
    let n = dd.degree();
    if let Some(&bad) = c.iter().find(|&&i| i == 0 || i > n) {
        return Err(HopfError::InvalidChord(bad, n));
    }
    Ok(())
}

/// Rebuild a polygon from contracted edges: `sides` lists the kept sides in
/// order, `chords` the kept chords; vertex j is the class of side j's source.
fn rebuild(
    graph: &DecoratedGraph,
    class: &[usize],
    sides: &[usize],
    chords: &[usize],
) -> Result<(DecoratedDiagram, Vec<usize>, Vec<bool>), HopfError> {
    let m = sides.len() - 1;
    let by_tag: BTreeMap<EdgeTag, &Edge> = graph.edges.iter().map(|e| (e.tag, e)).collect();
    let mut index: BTreeMap<usize, usize> = BTreeMap::new();
    for (j, &s) in sides.iter().enumerate() {
        if index.insert(class[s], j).is_some() {
            return Err(HopfError::Internal("two kept sides share a source class"));
        }
    }
    let mut b = Vec::with_capacity(m + 1);
    for (j, &s) in sides.iter().enumerate() {
        let e = by_tag[&EdgeTag::Side(s)];
        if index.get(&e.src) != Some(&j) || index.get(&e.dst) != Some(&((j + 1) % (m + 1))) {
            return Err(HopfError::Internal("side does not bound the rebuilt polygon"));
        }
        b.push(e.dec.clone());
    }
    let mut edges = Vec::with_capacity(chords.len());
    let mut decs = Vec::with_capacity(chords.len());
    for &c in chords {
        let e = by_tag[&EdgeTag::Chord(c)];
        let (Some(&u), Some(&w)) = (index.get(&e.src), index.get(&e.dst)) else {
            return Err(HopfError::Internal("chord endpoint off the rebuilt polygon"));
        };
        edges.push((u, w));
        decs.push(e.dec.clone());
    }
    let (parent, origin) = orient_tree(m + 1, &edges);
    if parent.iter().any(|&p| p == usize::MAX) {
        return Err(HopfError::Internal("rebuilt chords do not span"));
    }
    let mut a = Vec::with_capacity(m);
    let mut labels = Vec::with_capacity(m);
    let mut flipped = Vec::with_capacity(m);
    for &(k, f) in &origin {
        let d = &decs[k - 1];
        a.push(if f { d.neg() } else { d.clone() });
        labels.push(chords[k - 1]);
        flipped.push(f);
    }
    let diagram = DissectionDiagram::new(parent).map_err(HopfError::Diagram)?;
    Ok((DecoratedDiagram { diagram, a, b }, labels, flipped))
}

/// The factors q_C^α(D) in face order (including degree-0 faces).
pub fn q_faces(dd: &DecoratedDiagram, c: &BTreeSet<usize>) -> Result<Vec<QFace>, HopfError> {
    check_subset(dd, c)?;
    let fp = faces(&dd.diagram, c)?;
    let g = dd.total_graph();
    let contract: Vec<usize> = c.iter().map(|&i| i - 1).collect();
    let ct = g.contract_edges(&contract)?;
    let mut out = Vec::with_capacity(fp.blocks.len());
    for face in &fp.blocks {
        let (diagram, chords, flipped) = rebuild(&ct.graph, &ct.class, &face.sides, &face.chords)?;
        out.push(QFace {
            diagram,
            sides: face.sides.clone(),
            chords,
            flips: flipped.iter().filter(|&&f| f).count(),
        });
    }
    Ok(out)
}

/// q_C(D) as a monomial.
pub fn q_c(dd: &DecoratedDiagram, c: &BTreeSet<usize>) -> Result<super::Monomial, HopfError> {
    Ok(super::Monomial::from_factors(q_faces(dd, c)?.into_iter().map(|f| f.diagram)))
}

/// r_C(D): keep the chords of C, contract the sides of S_C^+.
pub fn r_c(dd: &DecoratedDiagram, c: &BTreeSet<usize>) -> Result<FlipReport, HopfError> {
    check_subset(dd, c)?;
    let n = dd.degree();
    let splus = s_c_plus(&dd.diagram, c)?;
    let full = dd.total_graph();
    let edges: Vec<Edge> = full
        .edges
        .into_iter()
        .filter(|e| match e.tag {
            EdgeTag::Chord(i) => c.contains(&i),
            EdgeTag::Side(_) => true,
        })
        .collect();
    let g = DecoratedGraph { num_vertices: n + 1, edges };
    let contract: Vec<usize> = g
        .edges
        .iter()
        .enumerate()
        .filter(|(_, e)| matches!(e.tag, EdgeTag::Side(s) if splus.contains(&s)))
        .map(|(k, _)| k)
        .collect();
    let ct = g.contract_edges(&contract)?;
    let sides: Vec<usize> = (0..=n).filter(|s| !splus.contains(s)).collect();
    let chords: Vec<usize> = c.iter().copied().collect();
    let (diagram, labels, flips) = rebuild(&ct.graph, &ct.class, &sides, &chords)?;
    let flipped: BTreeSet<usize> = labels.iter().zip(&flips).filter(|(_, &f)| f).map(|(&l, _)| l).collect();
    Ok(FlipReport { diagram, k: flipped.len(), flipped, chords: labels, sides })
}

/// K_C(D) by contracting the sides of S_C^+ one at a time in decreasing order
/// and flipping chord paths to keep every component rooted.
pub fn k_c_direct(d: &DissectionDiagram, c: &BTreeSet<usize>) -> Result<BTreeSet<usize>, HopfError> {
    let n = d.degree();
    let splus = s_c_plus(d, c)?;
    let mut uf: Vec<usize> = (0..=n).collect();
    fn find(uf: &[usize], mut x: usize) -> usize {
        while uf[x] != x {
            x = uf[x];
        }
        x
    }
    // current orientation of each chord as (source vertex, target vertex)
    let mut dir: BTreeMap<usize, (usize, usize)> = c.iter().map(|&i| (i, (i, d.parent(i)))).collect();
    let mut flipped: BTreeSet<usize> = BTreeSet::new();
    for &s in splus.iter().rev() {
        let (u, v) = d.side_endpoints(s);
        let cu = find(&uf, u);
        let cv = find(&uf, v);
        if cu == cv {
            return Err(HopfError::Internal("side contraction closes a cycle"));
        }
        // flip the chord path from cu to its component root
        let mut path = Vec::new();
        let mut cur = cu;
        while let Some((&ch, _)) = dir.iter().find(|(_, &(src, _))| find(&uf, src) == cur) {
            path.push(ch);
            cur = find(&uf, dir[&ch].1);
            if path.len() > n {
                return Err(HopfError::Internal("chord orientation is cyclic"));
            }
        }
        for ch in path {
            let e = dir.get_mut(&ch).expect("chord");
            *e = (e.1, e.0);
            if !flipped.insert(ch) {
                flipped.remove(&ch);
            }
        }
        uf[cu] = cv;
    }
    Ok(flipped)
}

/// K_C(D) from the three conditions: the chord's C-path misses the root,
/// decreases strictly, and no C-chord from a larger vertex enters it past the start.
pub fn k_c_k123(d: &DissectionDiagram, c: &BTreeSet<usize>) -> BTreeSet<usize> {
    let mut out = BTreeSet::new();
    for &i0 in c {
        let path = d.chord_path(i0, c);
        let end = *path.last().expect("nonempty");
        let k1 = end != 0;
        let k2 = path.windows(2).all(|w| w[0] > w[1]);
        let k3 = path[1..]
            .iter()
            .all(|&ik| !c.iter().any(|&j| d.parent(j) == ik && j > i0));
        if k1 && k2 && k3 {
            out.insert(i0);
        }
    }
    out
}

/// K_C(D) as the chords reached by a C-path starting at a vertex of S_C^+.
pub fn k_c_path(d: &DissectionDiagram, c: &BTreeSet<usize>) -> Result<BTreeSet<usize>, HopfError> {
    let splus = s_c_plus(d, c)?;
    let mut out = BTreeSet::new();
    for &x in &splus {
        let path = d.chord_path(x, c);
        for w in path.windows(2) {
            out.insert(w[0]);
        }
    }
    Ok(out)
}

/// Decompose K_C(D) into its maximal chord paths `i_0 → i_1 → … → i_r`
/// (listed as vertices).
pub fn k_paths(d: &DissectionDiagram, k: &BTreeSet<usize>) -> Vec<Vec<usize>> {
    let entered: BTreeSet<usize> = k.iter().map(|&i| d.parent(i)).collect();
    let mut out = Vec::new();
    for &h in k {
        if entered.contains(&h) {
            continue;
        }
        let mut path = vec![h];
        let mut cur = h;
        while k.contains(&cur) {
            cur = d.parent(cur);
            path.push(cur);
        }
        out.push(path);
    }
    out
}

/// σ_C as a map i -> σ(i) on {1..n} (index i-1), assembled from the chord-to-side
/// relabelings of q_C (on C̄) and r_C (on C).
pub fn sigma_c(dd: &DecoratedDiagram, c: &BTreeSet<usize>) -> Result<Vec<usize>, HopfError> {
    let n = dd.degree();
    let mut sigma = vec![0usize; n];
    for face in q_faces(dd, c)? {
        for (j, &ch) in face.chords.iter().enumerate() {
            sigma[ch - 1] = face.sides[j + 1];
        }
    }
    let r = r_c(dd, c)?;
    for (j, &ch) in r.chords.iter().enumerate() {
        sigma[ch - 1] = r.sides[j + 1];
    }
    Ok(sigma)
}

/// Product of the cycles (i_0 i_1 … i_r) over the paths of K_C(D).
pub fn sigma_from_paths(n: usize, paths: &[Vec<usize>]) -> Vec<usize> {
    let mut sigma: Vec<usize> = (1..=n).collect();
    for p in paths {
        for w in p.windows(2) {
            sigma[w[0] - 1] = w[1];
        }
        sigma[p[p.len() - 1] - 1] = p[0];
    }
    sigma
}
