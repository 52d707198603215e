use hypmetrica::geometry::{
    convex_hull, diameter, invert, point_in_polygon, sample_boundary, sample_boundary_focused, smallest_enclosing_disk,
    DomainSpec, Point,
};
use hypmetrica::Error;
use proptest::prelude::*;

fn p(x: f64, y: f64) -> Point {
    Point::new(x, y)
}

fn coord() -> impl Strategy<Value = f64> {
    -10.0f64..10.0
}

fn point() -> impl Strategy<Value = Point> {
    (coord(), coord()).prop_map(|(x, y)| p(x, y))
}

#[test]
fn catalog_domains_validate_and_round_trip() {
    let all = [
        DomainSpec::unit_disk(),
        DomainSpec::disk(p(1.0, -2.0), 3.0),
        DomainSpec::upper_half_plane(),
        DomainSpec::strip(1.0),
        DomainSpec::annulus(0.5, 2.0),
        DomainSpec::punctured_disk(Point::ORIGIN),
        DomainSpec::punctured_plane(Point::ORIGIN),
        DomainSpec::disk_exterior(Point::ORIGIN, 1.0),
        DomainSpec::square_exterior(2.0),
        DomainSpec::square(1.0),
        DomainSpec::lollipop(),
        DomainSpec::slit_half_plane(),
        DomainSpec::half_strip(),
        DomainSpec::half_strip_minus_rectangle(0.5),
        DomainSpec::square_minus_disk(),
    ];
    for d in &all {
        d.validate().unwrap();
        let back = DomainSpec::from_json(&d.to_json()).unwrap();
        assert_eq!(&back, d);
        assert!(d.anchor().is_finite());
        assert!(d.scale() > 0.0 && d.scale().is_finite());
    }
}

#[test]
fn malformed_domains_are_rejected() {
    assert!(DomainSpec::from_json("{}").is_err());
    assert!(DomainSpec::from_json("not json").is_err());
    let bad = r#"{"base":{"type":"disk","center":[0,0],"radius":-1}}"#;
    assert!(DomainSpec::from_json(bad).is_err());
}

#[test]
fn boundary_distance_closed_forms() {
    let disk = DomainSpec::unit_disk();
    assert!((disk.dist_to_boundary(p(0.3, 0.4)).unwrap() - 0.5).abs() < 1e-15);
    let h = DomainSpec::upper_half_plane();
    assert_eq!(h.dist_to_boundary(p(-7.0, 2.5)).unwrap(), 2.5);
    let s = DomainSpec::strip(1.0);
    assert!((s.dist_to_boundary(p(3.0, 0.25)).unwrap() - 0.75).abs() < 1e-15);
    let a = DomainSpec::annulus(0.5, 2.0);
    assert!((a.dist_to_boundary(p(0.0, 0.75)).unwrap() - 0.25).abs() < 1e-15);
    assert!((a.dist_to_boundary(p(1.5, 0.0)).unwrap() - 0.5).abs() < 1e-15);
    let pd = DomainSpec::punctured_disk(Point::ORIGIN);
    assert!((pd.dist_to_boundary(p(0.2, 0.0)).unwrap() - 0.2).abs() < 1e-15);
    assert!(matches!(disk.dist_to_boundary(p(2.0, 0.0)), Err(Error::PointOutsideDomain(..))));
}

#[test]
fn convexity_flags() {
    assert!(DomainSpec::unit_disk().is_convex());
    assert!(DomainSpec::strip(1.0).is_convex());
    assert!(DomainSpec::square(1.0).is_convex());
    assert!(!DomainSpec::annulus(0.5, 2.0).is_convex());
    assert!(!DomainSpec::slit_half_plane().is_convex());
}

#[test]
fn sampling_respects_budget_and_lies_on_boundary() {
    for d in [DomainSpec::unit_disk(), DomainSpec::annulus(0.5, 2.0), DomainSpec::square(1.0), DomainSpec::lollipop()] {
        let s = sample_boundary(&d, 200).unwrap();
        assert_eq!(s.sample_count, 200);
        assert!(!s.is_empty());
        for q in &s.points {
            let near = d.primitives().iter().map(|pr| pr.nearest(*q).0).fold(f64::INFINITY, f64::min);
            assert!(near < 1e-12, "{q:?} is {near} off the boundary");
        }
    }
    assert!(sample_boundary(&DomainSpec::unit_disk(), 2).is_err());
}

#[test]
fn focused_sampling_is_denser_near_focus() {
    let d = DomainSpec::unit_disk();
    let z = p(0.9, 0.0);
    let s = sample_boundary_focused(&d, 256, &[z]).unwrap();
    let near = s.points.iter().filter(|q| q.dist(p(1.0, 0.0)) < 0.2).count();
    let u = sample_boundary(&d, 256).unwrap();
    let near_u = u.points.iter().filter(|q| q.dist(p(1.0, 0.0)) < 0.2).count();
    assert!(near > near_u);
}

#[test]
fn inversion_at_center_fails() {
    assert!(matches!(invert(p(1.0, 1.0), p(1.0, 1.0)), Err(Error::InversionAtCenter)));
}

#[test]
fn enclosing_disk_small_cases() {
    assert!(matches!(smallest_enclosing_disk(&[]), Err(Error::EmptyInput)));
    let one = smallest_enclosing_disk(&[p(2.0, 3.0)]).unwrap();
    assert_eq!((one.center, one.radius), (p(2.0, 3.0), 0.0));
    let tri = smallest_enclosing_disk(&[p(1.0, 0.0), p(-0.5, 0.75f64.sqrt()), p(-0.5, -(0.75f64.sqrt()))]).unwrap();
    assert!(tri.center.norm() < 1e-12 && (tri.radius - 1.0).abs() < 1e-12);
    // Obtuse triangle: the long side is a diameter.
    let obtuse = smallest_enclosing_disk(&[p(-1.0, 0.0), p(1.0, 0.0), p(0.0, 0.1)]).unwrap();
    assert!(obtuse.center.norm() < 1e-12 && (obtuse.radius - 1.0).abs() < 1e-12);
    let collinear = smallest_enclosing_disk(&[p(0.0, 0.0), p(1.0, 1.0), p(3.0, 3.0)]).unwrap();
    assert!((collinear.radius - 4.5f64.sqrt()).abs() < 1e-12);
}

#[test]
fn hull_of_square_with_interior_points() {
    let pts = [p(0.0, 0.0), p(1.0, 0.0), p(1.0, 1.0), p(0.0, 1.0), p(0.5, 0.5), p(0.2, 0.7)];
    let h = convex_hull(&pts);
    assert_eq!(h.len(), 4);
    let (d, _, _) = diameter(&pts);
    assert!((d - 2f64.sqrt()).abs() < 1e-15);
}

#[test]
fn polygon_membership() {
    let sq = [p(0.0, 0.0), p(1.0, 0.0), p(1.0, 1.0), p(0.0, 1.0)];
    assert!(point_in_polygon(p(0.5, 0.5), &sq));
    assert!(point_in_polygon(p(1.0, 0.5), &sq));
    assert!(!point_in_polygon(p(1.5, 0.5), &sq));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn inversion_is_an_involution(c in point(), w in point()) {
        prop_assume!(c.dist(w) > 1e-3);
        let back = invert(c, invert(c, w).unwrap()).unwrap();
        prop_assert!(back.dist(w) <= 1e-9 * (1.0 + w.norm()));
    }

    #[test]
    fn inversion_maps_radius_to_reciprocal(c in point(), w in point()) {
        prop_assume!(c.dist(w) > 1e-3);
        let v = invert(c, w).unwrap();
        prop_assert!((v.dist(c) * w.dist(c) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn enclosing_disk_obeys_jung_bounds(pts in prop::collection::vec(point(), 2..40)) {
        let d = smallest_enclosing_disk(&pts).unwrap();
        let (diam, _, _) = diameter(&pts);
        for q in &pts {
            prop_assert!(q.dist(d.center) <= d.radius * (1.0 + 1e-9) + 1e-12);
        }
        prop_assert!(diam / 2.0 <= d.radius * (1.0 + 1e-12) + 1e-12);
        prop_assert!(d.radius <= diam / 3f64.sqrt() * (1.0 + 1e-9) + 1e-12);
    }

    #[test]
    fn hull_contains_every_point(pts in prop::collection::vec(point(), 3..40)) {
        let h = convex_hull(&pts);
        prop_assume!(h.len() >= 3);
        for q in &pts {
            prop_assert!(point_in_polygon(*q, &h) || h.iter().any(|v| v.dist(*q) < 1e-12));
        }
    }

    #[test]
    fn disk_distance_is_one_lipschitz(a in (-0.7f64..0.7, -0.7f64..0.7), b in (-0.7f64..0.7, -0.7f64..0.7)) {
        let d = DomainSpec::unit_disk();
        let (x, y) = (p(a.0, a.1), p(b.0, b.1));
        prop_assume!(d.contains(x) && d.contains(y));
        let dx = d.dist_to_boundary(x).unwrap();
        let dy = d.dist_to_boundary(y).unwrap();
        prop_assert!((dx - dy).abs() <= x.dist(y) + 1e-12);
    }

    #[test]
    fn annulus_membership_matches_radii(x in -3.0f64..3.0, y in -3.0f64..3.0) {
        let a = DomainSpec::annulus(0.5, 2.0);
        let r = x.hypot(y);
        if r > 0.5 + 1e-9 && r < 2.0 - 1e-9 {
            prop_assert!(a.contains(p(x, y)));
        } else if !(0.5 - 1e-9..=2.0 + 1e-9).contains(&r) {
            prop_assert!(!a.contains(p(x, y)));
        }
    }
}
