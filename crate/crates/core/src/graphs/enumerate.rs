//! Enumeration of admissible graph classes 𝒢_{k,m} with v-degrees.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use super::graph::{AdmissibleGraph, Target};

/// Ordered target sequences of length `k` for interior vertex `i`; whites are left unlabeled (`White(0)`).
fn vertex_options(i: usize, n: usize, m: usize, k: usize) -> Vec<Vec<Target>> {
    let mut alphabet: Vec<Target> = (0..n).filter(|&j| j != i).map(Target::Interior).collect();
    alphabet.extend((0..m).map(Target::Boundary));
    alphabet.push(Target::White(0));
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(alphabet: &[Target], k: usize, cur: &mut Vec<Target>, out: &mut Vec<Vec<Target>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for &t in alphabet {
            if t.is_black() && cur.contains(&t) {
                continue;
            }
            cur.push(t);
            rec(alphabet, k, cur, out);
            cur.pop();
        }
    }
    rec(&alphabet, k, &mut cur, &mut out);
    out
}

fn degree_vectors(n: usize, max_deg: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        let mut next = Vec::new();
        for v in &out {
            for d in 0..=max_deg {
                let mut w = v.clone();
                w.push(d);
                next.push(w);
            }
        }
        out = next;
    }
    out
}

fn cartesian(options: &[Vec<Vec<Target>>]) -> Vec<Vec<Vec<Target>>> {
    let mut out: Vec<Vec<Vec<Target>>> = vec![vec![]];
    for opts in options {
        let mut next = Vec::with_capacity(out.len() * opts.len());
        for prefix in &out {
            for o in opts {
                let mut p = prefix.clone();
                p.push(o.clone());
                next.push(p);
            }
        }
        out = next;
    }
    out
}

/// One representative per class, sorted by class key.
///
/// Requires `m ≥ 1`. White counts range over all admissible values; v-degrees over `0..=max_deg`.
pub fn enumerate(k: &[usize], m: usize, max_deg: u32) -> Vec<AdmissibleGraph> {
    enumerate_degrees(k, m, &degree_vectors(k.len(), max_deg))
}

/// Graph classes with the v-degree vector fixed to `deg`.
pub fn enumerate_with_degrees(k: &[usize], m: usize, deg: &[u32]) -> Vec<AdmissibleGraph> {
    assert_eq!(k.len(), deg.len(), "one v-degree per interior vertex");
    enumerate_degrees(k, m, &[deg.to_vec()])
}

fn enumerate_degrees(k: &[usize], m: usize, degs: &[Vec<u32>]) -> Vec<AdmissibleGraph> {
    assert!(m >= 1, "the basepoint boundary vertex always exists");
    let n = k.len();
    let options: Vec<Vec<Vec<Target>>> = (0..n).map(|i| vertex_options(i, n, m, k[i])).collect();
    let combos = cartesian(&options);
    let build = |edges: &Vec<Vec<Target>>| -> Vec<AdmissibleGraph> {
        let base = AdmissibleGraph::new(m, vec![0; n], edges.clone()).canonical();
        degs.iter().map(|d| AdmissibleGraph { deg: d.clone(), ..base.clone() }).collect()
    };
    #[cfg(feature = "parallel")]
    let mut graphs: Vec<AdmissibleGraph> = combos.par_iter().flat_map_iter(build).collect();
    #[cfg(not(feature = "parallel"))]
    let mut graphs: Vec<AdmissibleGraph> = combos.iter().flat_map(build).collect();
    let mut keyed: Vec<(String, AdmissibleGraph)> =
        graphs.drain(..).map(|g| (g.canonical_key().expect("enumerated graphs are admissible").0, g)).collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    keyed.dedup_by(|a, b| a.0 == b.0);
    keyed.into_iter().map(|(_, g)| g).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_counts() {
        assert_eq!(enumerate(&[0], 1, 3).len(), 4);
        assert_eq!(enumerate(&[1], 1, 0).len(), 2);
        assert_eq!(enumerate(&[2], 1, 0).len(), 3);
    }

    #[test]
    fn two_vertex_example_is_enumerated() {
        let all = enumerate(&[2, 3], 3, 1);
        let key = super::super::graph::two_vertex_example((0, 1)).canonical_key().unwrap();
        assert!(all.iter().any(|g| g.canonical_key().unwrap() == key));
    }
}
