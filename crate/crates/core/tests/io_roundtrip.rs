use coastpca::io::{contours_to_string, parse_contours, parse_raster, raster_to_string, ContourDocument};
use coastpca::{Contour, GeoPoint, RasterGrid};
use proptest::prelude::*;

fn coordinate() -> impl Strategy<Value = f64> {
    prop_oneof![
        -180.0f64..180.0,
        Just(0.0),
        Just(-0.0),
        (-1e-12f64..1e-12),
        (0.0f64..1.0).prop_map(|v| v / 3.0),
    ]
}

fn contour(index: usize) -> impl Strategy<Value = Contour> {
    (
        prop::collection::vec((coordinate(), coordinate().prop_map(|v| v / 2.0)), 3..40),
        any::<bool>(),
        prop::option::of("[a-z]{1,6}"),
    )
        .prop_filter_map("closed contours need distinct ends", move |(pts, closed, class)| {
            let pts: Vec<GeoPoint> = pts.into_iter().map(GeoPoint::from).collect();
            let mut c = Contour::new(format!("f{index}"), pts, closed).ok()?;
            c.class = class;
            Some(c)
        })
}

fn document() -> impl Strategy<Value = ContourDocument> {
    (0usize..6).prop_flat_map(|n| {
        (0..n)
            .map(contour)
            .collect::<Vec<_>>()
            .prop_map(ContourDocument::new)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn geojson_round_trip(doc in document()) {
        let text = contours_to_string(&doc).unwrap();
        let back = parse_contours(&text).unwrap();
        prop_assert_eq!(back.len(), doc.len());
        for (a, b) in back.contours.iter().zip(&doc.contours) {
            prop_assert_eq!(&a.id, &b.id);
            prop_assert_eq!(&a.class, &b.class);
            prop_assert_eq!(a.closed, b.closed);
            let bits = |c: &Contour| c.points.iter().map(|p| (p.lon.to_bits(), p.lat.to_bits())).collect::<Vec<_>>();
            prop_assert_eq!(bits(a), bits(b));
        }
    }

    #[test]
    fn raster_round_trip(
        nrows in 1usize..12,
        ncols in 1usize..12,
        seed in prop::collection::vec(prop_oneof![
            any::<f64>().prop_filter("finite", |v| v.is_finite()),
            -1e4f64..1e4,
            Just(-9999.0),
        ], 144),
        xll in -180.0f64..180.0,
        cellsize in 1e-6f64..1.0,
    ) {
        let mut g = RasterGrid::from_fn(nrows, ncols, |r, c| seed[r * ncols + c]);
        g.xll = xll;
        g.cellsize = cellsize;
        let back = parse_raster(&raster_to_string(&g)).unwrap();
        prop_assert!(back.same_header(&g));
        let bits = |x: &RasterGrid| x.values().iter().map(|v| v.to_bits()).collect::<Vec<_>>();
        prop_assert_eq!(bits(&back), bits(&g));
    }
}

#[test]
fn polygon_closure_convention() {
    let doc = ContourDocument::new(vec![Contour::new(
        "sq",
        vec![GeoPoint::new(0.0, 0.0), GeoPoint::new(1.0, 0.0), GeoPoint::new(1.0, 1.0), GeoPoint::new(0.0, 1.0)],
        true,
    )
    .unwrap()]);
    let text = contours_to_string(&doc).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let ring = v["features"][0]["geometry"]["coordinates"][0].as_array().unwrap();
    assert_eq!(ring.len(), 5);
    assert_eq!(ring[0], ring[4]);
    assert_eq!(parse_contours(&text).unwrap().contours[0].points.len(), 4);
}
