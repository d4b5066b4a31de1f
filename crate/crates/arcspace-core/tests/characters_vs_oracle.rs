use arcspace_core::arcjets::{filtration_dims, reduced_component_dim, ComponentKey};
use arcspace_core::characters::{
    component_character, freeness_check, principal_ideal_slice_dims, veronese_segre_character,
};
use arcspace_core::cubedata::{box_data, planar_data, segment_data, simplex_data, CubeGenData};
use arcspace_core::lattice::{LatticePoint, LatticePolytope, PointOrder};
use arcspace_core::toricring::{cells, ToricContext};

fn polygon(vs: &[[i64; 2]]) -> LatticePolytope {
    LatticePolytope::from_vertices(
        vs.iter().map(|v| LatticePoint::new(v.to_vec())).collect(),
        PointOrder::Paper2d,
    )
    .unwrap()
}

fn compare(p: LatticePolytope, data: &CubeGenData, max_l: u32, max_d: u32) {
    let ctx = ToricContext::new(p).unwrap();
    for l in 1..=max_l {
        let chi = component_character(data, l, max_d);
        let cells = cells(&ctx, l);
        assert_eq!(chi.weights().len(), cells.len());
        for a_bar in cells.keys() {
            assert!(freeness_check(&chi, a_bar));
            for d in 0..=max_d {
                let key = ComponentKey::new(a_bar.clone(), l, d);
                assert_eq!(
                    chi.get(a_bar, d),
                    reduced_component_dim(&ctx, &key) as u64,
                    "a={a_bar:?} l={l} d={d}"
                );
            }
        }
    }
}

#[test]
fn segments() {
    for zeta in 1..=3 {
        let (p, data) = segment_data(zeta);
        compare(p, &data, 3, 4);
    }
}

#[test]
fn polygons() {
    for vs in [
        vec![[0, 0], [1, 0], [0, 1], [1, 1]],
        vec![[0, 1], [1, 0], [1, 1]],
        vec![[0, 1], [1, 0], [2, 0], [2, 1]],
        vec![[0, 2], [2, 0], [2, 2]],
    ] {
        let p = polygon(&vs);
        let data = planar_data(&p).unwrap();
        compare(p, &data, 2, 4);
    }
}

#[test]
fn lifted_families() {
    let (p, data) = box_data(&[1, 1, 1]).unwrap();
    compare(p, &data, 2, 3);
    let (p, data) = simplex_data(2, 2).unwrap();
    compare(p, &data, 2, 3);
}

#[test]
fn filtration_is_additive() {
    let (p, data) = segment_data(2);
    let ctx = ToricContext::new(p).unwrap();
    let gamma = data.gamma_matrix();
    for d in 0..=4 {
        let steps = filtration_dims(&ctx, &[2], 2, d, |a, b| data.order().compare(a, b).unwrap());
        let chi = component_character(&data, 2, 4);
        let total: u64 = steps
            .iter()
            .map(|s| principal_ideal_slice_dims(&s.r, &gamma, d))
            .sum();
        assert_eq!(total, chi.get(&[2], d));
        for s in &steps {
            assert_eq!(
                s.subquotient as u64,
                principal_ideal_slice_dims(&s.r, &gamma, d)
            );
        }
    }
}

#[test]
fn segre_square_totals() {
    let (_, data) = box_data(&[1, 1]).unwrap();
    for ell in 1..=2 {
        let direct = component_character(&data, ell, 4);
        let vs = veronese_segre_character(&[2, 2], &[1, 1], ell, 4).unwrap();
        assert_eq!(vs.totals(), direct.totals(), "ell={ell}");
    }
}
