use smallball_core::asymptotics::closed_law;
use smallball_core::catalog::{catalog_entries, catalog_process, Family, ProcessParams, ProcessSpec};
use smallball_core::constants::{distortion_closed_form, distortion_numeric, DEFAULT_TAIL_ORDER};
use smallball_core::oracle::{prob_imhof, prob_saddlepoint, tail_completed_spectrum, CompletedSpectrum, DEFAULT_TAIL_LENGTH};
use smallball_core::spectral::spectrum;
use smallball_core::Error;

fn completed(spec: &ProcessSpec) -> CompletedSpectrum {
    tail_completed_spectrum(&spectrum(spec, 200).unwrap(), spec, DEFAULT_TAIL_LENGTH).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a / b - 1.0).abs()
}

#[test]
fn frozen_wiener_probabilities() {
    let cs = completed(&catalog_process(Family::WienerTowerIntegrated, &ProcessParams::l(0)).unwrap());
    assert!(cs.junction_error < 1e-12);
    for (eps, want) in [
        (0.3, 0.135_171_528_669_602_22),
        (0.2, 0.017_563_585_843_021_16),
        (0.1, 8.107_730_812_542_969e-7),
        (0.05, 2.155_219_898_010_544_3e-23),
    ] {
        let p = prob_saddlepoint(&cs, eps).unwrap();
        assert!(rel(p, want) < 1e-7, "eps={eps}: {p:e}");
    }
    assert!(rel(prob_imhof(&cs, 0.3).unwrap(), 0.135_171_528_669_602_22) < 1e-7);
}

#[test]
fn frozen_distortion_constant() {
    let spec = catalog_process(Family::SlepianIntegrated, &ProcessParams::c(1.0).with_m(1, &[0])).unwrap();
    let want = 5.614_677_753_906_064;
    assert!(rel(distortion_closed_form(&spec).unwrap().value, want) < 1e-12);
    let sp = spectrum(&spec, 2000).unwrap();
    assert!(rel(distortion_numeric(&sp, spec.ell, spec.kappa, spec.theta_ell, DEFAULT_TAIL_ORDER).unwrap().value, want) < 1e-7);
}

#[test]
fn integrated_wiener_junction() {
    let spec = catalog_process(Family::WienerTowerIntegrated, &ProcessParams::l(1)).unwrap();
    assert!(completed(&spec).junction_error < 1e-3);
}

#[test]
fn oracles_agree_across_catalog() {
    let mut compared = 0;
    for spec in catalog_entries(3).iter().step_by(3) {
        let cs = completed(spec);
        for eps in [0.5, 0.3, 0.2, 0.1] {
            let s = prob_saddlepoint(&cs, eps).unwrap();
            match prob_imhof(&cs, eps) {
                Ok(i) => {
                    assert!(rel(i, s) < 0.02, "{} eps={eps}: imhof {i:e} saddle {s:e}", spec.label());
                    compared += 1;
                }
                Err(Error::PrecisionLoss(_)) => assert!(s < 1e-10, "{} eps={eps}", spec.label()),
                Err(e) => panic!("{}: {e}", spec.label()),
            }
        }
    }
    assert!(compared > 20);
}

#[test]
fn law_tracks_oracle_for_slepian() {
    let spec = catalog_process(Family::Slepian, &ProcessParams::c(2.0)).unwrap();
    let law = closed_law(&spec).unwrap();
    let p = prob_saddlepoint(&completed(&spec), 0.05).unwrap();
    assert!(rel(law.eval(0.05), p) < 0.1);
}
