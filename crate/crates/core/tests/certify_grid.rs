use mcmullen::certify::{
    certify_polynomial_like, certify_polynomial_like_with, certify_uprime_subset_u,
    certify_winding, PolyLikeOptions, DEFAULT_DELTA,
};
use mcmullen::dynamics::MapParams;
use mcmullen::regions::{DomainSpec, ParamWindow};
use mcmullen::Complex64;

const C_GRID: [f64; 5] = [-1.0, -0.75, -0.5, -0.25, -1e-3];

#[test]
fn aplane_grid_is_polynomial_like_and_winds_once() {
    for n in 3..=7 {
        for c in C_GRID {
            let w = ParamWindow::a_plane(n, c).unwrap();
            let r = certify_winding(&w, w.domain(), 1024).unwrap();
            assert!(r.passed, "{r}");
            for a in w.sample_boundary(16).unwrap() {
                let p = MapParams::new(n, a, Complex64::new(c, 0.0)).unwrap();
                let r = certify_polynomial_like(&p, DomainSpec::standard(0));
                assert!(r.passed, "{}", r.to_text());
            }
        }
    }
}

#[test]
fn subset_margin_is_stable_under_doubling() {
    let cases = [
        (
            MapParams::new(
                3,
                Complex64::new(0.09725, 0.4351),
                Complex64::new(-0.5, 0.0),
            ),
            0,
        ),
        (MapParams::real(6, 2.0, -2.5), 3),
        (MapParams::real(11, 0.3, 0.1), 0),
    ];
    for (p, k) in cases {
        let p = p.unwrap();
        let d = if p.n() == 11 {
            DomainSpec::tight()
        } else {
            DomainSpec::standard(k)
        };
        let coarse = certify_uprime_subset_u(&p, d, 4096, DEFAULT_DELTA);
        let fine = certify_uprime_subset_u(&p, d, 4 * coarse.samples_used, DEFAULT_DELTA);
        assert!(coarse.passed && fine.passed);
        assert!((fine.margin - coarse.margin).abs() <= 0.01 * coarse.margin);
    }
}

#[test]
fn polynomial_like_margin_survives_refinement() {
    let p = MapParams::real(5, 2.0, -2.3).unwrap();
    let d = DomainSpec::standard(0);
    let base = certify_polynomial_like(&p, d);
    assert!(base.passed);
    let finer = certify_polynomial_like_with(
        &p,
        d,
        &PolyLikeOptions {
            boundary_samples: 16384,
            ..PolyLikeOptions::default()
        },
    );
    assert!(finer.passed);
    assert!(finer.margin >= base.margin * (1.0 - 1e-2));
}
