use super::cycles::ColoredCycleOnTree;
use super::ymodel::{YGraph, YModel};
use crate::error::Result;
use crate::params::HeavyParams;
use crate::poly::MomentPolynomial;
use crate::word::YWord;

/// `∏_e a_{j(e), k(e)}` where edge `e` is visited `2k(e)` times.
pub fn hw_weight(gc: &ColoredCycleOnTree, params: &HeavyParams) -> Result<MomentPolynomial> {
    let visits = gc.visits();
    let mut acc = MomentPolynomial::one();
    for v in 1..gc.num_vertices() {
        acc = &acc * &params.a(gc.edge_color(v), (visits[v] / 2) as u32)?;
    }
    Ok(acc)
}

/// The vertex box `T_v`: one node per tree edge incident to `v`; slot `n`
/// sits at the end of step `n` and joins the edges of steps `n` and `n+1`.
pub fn vertex_box(gc: &ColoredCycleOnTree, slots: &[YWord], v: usize) -> YGraph {
    let mut incident: Vec<usize> = Vec::new();
    if v != 0 {
        incident.push(v);
    }
    incident.extend(gc.children(v));
    let node = |e: usize| incident.iter().position(|&x| x == e).expect("incident edge");
    let l = gc.len();
    let mut edges = Vec::new();
    for n in 0..l {
        if gc.walk()[n + 1] == v {
            edges.push((node(gc.step_edge(n)), node(gc.step_edge((n + 1) % l)), slots[n].clone()));
        }
    }
    YGraph { n: incident.len(), edges }
}

/// `∏_v τ[T_v]`.
pub fn traffic_weight(gc: &ColoredCycleOnTree, slots: &[YWord], y: &YModel) -> Result<MomentPolynomial> {
    if slots.iter().all(YWord::is_empty) {
        return Ok(MomentPolynomial::one());
    }
    let mut acc = MomentPolynomial::one();
    for v in 0..gc.num_vertices() {
        let t = y.tau(&vertex_box(gc, slots, v))?;
        if t.is_zero() {
            return Ok(t);
        }
        acc = &acc * &t;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::cycles::enumerate_cycles;
    use crate::engine::ymodel::DiagonalMoments;
    use crate::poly::Symbol;

    #[test]
    fn heavy_weights_of_x4() {
        let p = HeavyParams::symbolic([1], 2).unwrap();
        let ws: Vec<String> =
            enumerate_cycles(&[1; 4], None).unwrap().iter().map(|c| hw_weight(c, &p).unwrap().to_string()).collect();
        assert_eq!(ws.iter().filter(|w| *w == "a[1,1]^2").count(), 2);
        assert_eq!(ws.iter().filter(|w| *w == "a[1,2]").count(), 1);
    }

    #[test]
    fn trivial_parameter_counts_edges() {
        let p = HeavyParams::trivial([1], crate::rational::q(3), 3).unwrap();
        for c in enumerate_cycles(&[1; 6], None).unwrap() {
            let w = hw_weight(&c, &p).unwrap();
            if c.is_double() {
                assert_eq!(w, MomentPolynomial::int(27));
            } else {
                assert!(w.is_zero());
            }
        }
    }

    #[test]
    fn diagonal_slots_xyxy() {
        let c = &enumerate_cycles(&[1, 1], None).unwrap()[0];
        let y = YModel::Diagonal(DiagonalMoments::Symbolic);
        let slots = vec![YWord(vec![1]), YWord(vec![1])];
        let m1 = MomentPolynomial::symbol(Symbol::M(YWord(vec![1])));
        assert_eq!(traffic_weight(c, &slots, &y).unwrap(), &m1 * &m1);
        assert_eq!(traffic_weight(c, &[YWord::default(), YWord::default()], &y).unwrap(), MomentPolynomial::one());
    }

    #[test]
    fn boxes_of_a_cherry() {
        // root with two children: walk 0 1 0 2 0
        let c = ColoredCycleOnTree::from_walk(&[0, 1, 0, 2, 0], &[1, 1, 1, 1]).unwrap();
        let s: Vec<YWord> = (1..=4).map(|j| YWord(vec![j])).collect();
        let root = vertex_box(&c, &s, 0);
        assert_eq!(root.n, 2);
        assert_eq!(root.edges, vec![(0, 1, YWord(vec![2])), (1, 0, YWord(vec![4]))]);
        let leaf = vertex_box(&c, &s, 1);
        assert_eq!(leaf.edges, vec![(0, 0, YWord(vec![1]))]);
    }
}
