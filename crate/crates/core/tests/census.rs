//! Census triangulations: validity, dual graphs, self-gluings and both
//! certificates.

use widthlab_core::census::{canonical_key, census, census_of_size};
use widthlab_core::dual::build_dual;
use widthlab_core::handles::{
    graph_certificate, leaf_handlebody, linear_certificate, HandleComplex, RootChoice,
    SelfGluingClass,
};
use widthlab_core::solvers::{congestion_exact, cutwidth_exact, Witness};
use widthlab_core::tri::{
    check_orientable, first_homology, parse_triangulation, serialize_triangulation, skeleton,
    validate_closed,
};

#[test]
fn census_counts() {
    // the known numbers of closed orientable triangulations
    let counts: Vec<usize> = (1..=3).map(|n| census_of_size(n).unwrap().len()).collect();
    assert_eq!(counts, vec![4, 16, 76]);
}

#[test]
fn census_members_are_distinct_valid_and_round_trip() {
    let all = census(3).unwrap();
    let mut keys: Vec<Vec<u8>> = all.iter().map(canonical_key).collect();
    keys.sort();
    keys.dedup();
    assert_eq!(keys.len(), all.len());
    for tri in &all {
        assert!(validate_closed(tri).is_valid());
        assert!(check_orientable(tri));
        let s = skeleton(tri);
        assert_eq!((s.euler, s.triangle_count), (0, 2 * tri.tet_count()));
        let g = build_dual(tri);
        assert!(g.is_regular(4) && g.is_connected());
        assert_eq!(g.arc_count(), 2 * tri.tet_count());
        let text = serialize_triangulation(tri);
        assert_eq!(&parse_triangulation(&text).unwrap(), tri);
    }
}

#[test]
fn one_tetrahedron_lens_spaces() {
    let mut orders: Vec<u64> = census_of_size(1)
        .unwrap()
        .iter()
        .map(|t| first_homology(t).order().expect("finite"))
        .collect();
    orders.sort_unstable();
    orders.dedup();
    assert_eq!(orders, vec![1, 4, 5]);
}

#[test]
fn self_glued_tetrahedra_are_balls_or_solid_tori() {
    let mut seen = Vec::new();
    for n in 2..=3 {
        for tri in census_of_size(n).unwrap() {
            let cx = HandleComplex::new(&tri).unwrap();
            for t in 0..n {
                let (class, surface) = leaf_handlebody(&cx, &tri, t).unwrap();
                let want = match class {
                    SelfGluingClass::NoSelfGluing | SelfGluingClass::SnappedBall => 0,
                    SelfGluingClass::SolidTorus => 1,
                    SelfGluingClass::Invalid => panic!("invalid leaf in {tri:?}"),
                };
                assert_eq!(surface.component_genera, vec![want]);
                assert_eq!(tri.classify_self_gluing(t), Ok(class));
                seen.push(class);
            }
        }
    }
    for class in [
        SelfGluingClass::NoSelfGluing,
        SelfGluingClass::SnappedBall,
        SelfGluingClass::SolidTorus,
    ] {
        assert!(seen.contains(&class), "{class:?} never occurs");
    }
}

#[test]
fn filtrations_are_monotone_and_subtrees_disjoint() {
    for tri in census(3).unwrap() {
        let n = tri.tet_count();
        let cx = HandleComplex::new(&tri).unwrap();
        let order: Vec<usize> = (0..n).collect();
        for j in 1..n {
            let a = cx.admissible_closure(&order[..j]);
            let b = cx.admissible_closure(&order[..=j]);
            assert!(a.is_subset(&b));
        }
        for mask in 1..(1usize << n) {
            let a: Vec<usize> = (0..n).filter(|t| mask >> t & 1 == 1).collect();
            let b: Vec<usize> = (0..n).filter(|t| mask >> t & 1 == 0).collect();
            assert!(cx.admissible_closure(&a).is_disjoint(&cx.admissible_closure(&b)));
            let h = cx.admissible_closure(&a);
            assert_eq!(cx.boundary_surface(&h).unwrap().euler, h.boundary_euler());
        }
    }
}

#[test]
fn certificates_hold_on_the_census() {
    for tri in census(3).unwrap() {
        let g = build_dual(&tri);
        let cx = HandleComplex::new(&tri).unwrap();
        let cw = cutwidth_exact(&g, 20).unwrap();
        let Witness::Layout(layout) = &cw.witness else { unreachable!() };
        let lin = linear_certificate(&cx, &tri, &layout.ordering).unwrap();
        assert!(lin.passes(), "{tri:?}");
        assert_eq!(lin.k, cw.value);
        assert_eq!(lin.l_upper, 6 * cw.value + 7);

        let cng = congestion_exact(&g, 12).unwrap();
        let Witness::Host(host) = &cng.witness else { unreachable!() };
        let cert = graph_certificate(&cx, &tri, host, RootChoice::MinGenus).unwrap();
        assert_eq!(cert.single_tet_case, tri.tet_count() == 1);
        assert!(cert.passes(), "{tri:?}");
        if !cert.single_tet_case {
            // every root choice satisfies the bound, not just the best one
            for r in 0..host.arcs().len() {
                let fixed = graph_certificate(&cx, &tri, host, RootChoice::Arc(r)).unwrap();
                assert!(fixed.passes());
                assert!(fixed.max_top_genus >= cert.max_top_genus);
            }
        }
    }
}
