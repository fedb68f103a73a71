use pnglab_web::{distribution_curves_json, exact_png_cdf_json, png_sample_json};
use serde_json::Value;

#[test]
fn curves_are_monotone_and_labelled() {
    let v: Value =
        serde_json::from_str(&distribution_curves_json("fgue, g, h", 0.5, 0.0, 0.0, -4.0, 4.0).unwrap()).unwrap();
    let curves = v.as_array().unwrap();
    assert_eq!(curves.len(), 3);
    assert_eq!(curves[0]["name"], "fgue");
    assert_eq!(curves[1]["name"], "g[0.5]");
    for c in curves {
        let cdf: Vec<f64> = c["cdf"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
        assert_eq!(cdf.len(), 161);
        assert!(cdf.windows(2).all(|p| p[1] >= p[0] - 1e-12));
    }
    assert!(distribution_curves_json("nope", 0.0, 0.0, 0.0, -1.0, 1.0).is_err());
    assert!(distribution_curves_json("fgue", 0.0, 0.0, 0.0, 1.0, -1.0).is_err());
}

#[test]
fn sample_carries_a_chain_of_its_own_points() {
    let v: Value = serde_json::from_str(&png_sample_json(5.0, 0.7, 0.3, 11).unwrap()).unwrap();
    let chain = v["chain"].as_array().unwrap();
    assert_eq!(chain.len() as u64, v["length"].as_u64().unwrap());
    assert!(!chain.is_empty());
    let xy = |p: &Value| (p[0].as_f64().unwrap(), p[1].as_f64().unwrap());
    for pair in chain.windows(2) {
        let (a, b) = (xy(&pair[0]), xy(&pair[1]));
        assert!(a.0 <= b.0 && a.1 <= b.1);
    }
    assert_eq!(png_sample_json(5.0, 0.7, 0.3, 11).unwrap(), png_sample_json(5.0, 0.7, 0.3, 11).unwrap());
    assert!(png_sample_json(100.0, 0.0, 0.0, 1).is_err());
}

#[test]
fn exact_rows() {
    let v: Value = serde_json::from_str(&exact_png_cdf_json(2.0, 0.5, 0.5, 20).unwrap()).unwrap();
    let cdf: Vec<f64> = v["cdf"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    assert_eq!(cdf.len(), 21);
    assert!(cdf.windows(2).all(|p| p[1] >= p[0]));
    assert!(cdf[20] > 0.999);
    assert_eq!(v["flagged"], 0);
    assert!(exact_png_cdf_json(20.0, 0.0, 0.0, 10).is_err());
}
