//! Orthonormal compactly supported filter tables.
//!
//! Coefficients are the reconstruction low-pass filters of the standard
//! Daubechies and least-asymmetric (Symmlet) families, normalized so that
//! `sum(h) = sqrt(2)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const QMF_TOLERANCE: f64 = 1e-12;

const HAAR: [f64; 2] = [std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2];

const DB2: [f64; 4] = [
    0.48296291314453416,
    0.8365163037378079,
    0.2241438680420134,
    -0.12940952255126037,
];

const DB4: [f64; 8] = [
    0.2303778133088965,
    0.7148465705529157,
    0.6308807679298589,
    -0.027983769416859854,
    -0.18703481171909309,
    0.030841381835560764,
    0.0328830116668852,
    -0.010597401785069032,
];

const DB6: [f64; 12] = [
    0.11154074335010947,
    0.49462389039845306,
    0.7511339080210954,
    0.31525035170919763,
    -0.22626469396543983,
    -0.12976686756726194,
    0.09750160558732304,
    0.027522865530305727,
    -0.03158203931748603,
    0.0005538422011614961,
    0.004777257510945511,
    -0.0010773010853084796,
];

const DB8: [f64; 16] = [
    0.05441584224310401,
    0.31287159091429995,
    0.6756307362972898,
    0.5853546836542067,
    -0.015829105256349306,
    -0.2840155429615469,
    0.0004724845739132828,
    0.12874742662047847,
    -0.017369301001807547,
    -0.044088253930794755,
    0.013981027917398282,
    0.008746094047405777,
    -0.004870352993451574,
    -0.00039174037337694705,
    0.0006754494064505693,
    -0.00011747678412476953,
];

const DB10: [f64; 20] = [
    0.026670057900555554,
    0.1881768000776915,
    0.5272011889317256,
    0.6884590394536035,
    0.2811723436605775,
    -0.24984642432731538,
    -0.19594627437737705,
    0.12736934033579325,
    0.09305736460357235,
    -0.07139414716639708,
    -0.029457536821875813,
    0.033212674059341,
    0.0036065535669561697,
    -0.010733175483330575,
    0.001395351747052901,
    0.001992405295185056,
    -0.0006858566949597116,
    -0.00011646685512928545,
    9.358867032006959e-05,
    -1.3264202894521244e-05,
];

const SYM4: [f64; 8] = [
    0.0322231006040427,
    -0.012603967262037833,
    -0.09921954357684722,
    0.29785779560527736,
    0.8037387518059161,
    0.49761866763201545,
    -0.02963552764599851,
    -0.07576571478927333,
];

const SYM6: [f64; 12] = [
    -0.007800708325034148,
    0.0017677118642428036,
    0.04472490177066578,
    -0.021060292512300564,
    -0.07263752278646252,
    0.3379294217276218,
    0.787641141030194,
    0.4910559419267466,
    -0.048311742585633,
    -0.11799011114819057,
    0.0034907120842174702,
    0.015404109327027373,
];

const SYM8: [f64; 16] = [
    0.0018899503327594609,
    -0.0003029205147213668,
    -0.01495225833704823,
    0.003808752013890615,
    0.049137179673607506,
    -0.027219029917056003,
    -0.05194583810770904,
    0.3644418948353314,
    0.7771857517005235,
    0.4813596512583722,
    -0.061273359067658524,
    -0.1432942383508097,
    0.007607487324917605,
    0.03169508781149298,
    -0.0005421323317911481,
    -0.0033824159510061256,
];

const SYM10: [f64; 20] = [
    -0.0004593294210046588,
    5.7036083618494284e-05,
    0.004593173585311828,
    -0.0008043589320165449,
    -0.02035493981231129,
    0.005764912033581909,
    0.04999497207737669,
    -0.0319900568824278,
    -0.03553674047381755,
    0.38382676106708546,
    0.7695100370211071,
    0.47169066693843925,
    -0.07088053578324385,
    -0.15949427888491757,
    0.011609893903711381,
    0.0459272392310922,
    -0.0014653825813050513,
    -0.008641299277022422,
    9.563267072289475e-05,
    0.0007701598091144901,
];

/// `(name, coefficients, vanishing moments)` for every shipped filter.
const TABLE: &[(&str, &[f64], usize)] = &[
    ("haar", &HAAR, 1),
    ("db2", &DB2, 2),
    ("db4", &DB4, 4),
    ("db6", &DB6, 6),
    ("db8", &DB8, 8),
    ("db10", &DB10, 10),
    ("sym4", &SYM4, 4),
    ("sym6", &SYM6, 6),
    ("sym8", &SYM8, 8),
    ("sym10", &SYM10, 10),
];

/// Names accepted by [`load_filter`].
pub fn available_filters() -> Vec<&'static str> {
    TABLE.iter().map(|(name, _, _)| *name).collect()
}

/// An orthonormal quadrature-mirror filter pair.
///
/// The scaling function and the wavelet built from it are both supported on
/// `[0, support_length]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FilterName", into = "FilterName")]
pub struct WaveletFilter {
    name: String,
    lowpass: Vec<f64>,
    highpass: Vec<f64>,
    n_vanishing_moments: usize,
}

impl WaveletFilter {
    /// Builds a filter from raw low-pass coefficients, checking normalization
    /// and double-shift orthonormality.
    pub fn from_lowpass(name: &str, lowpass: Vec<f64>, n_vanishing_moments: usize) -> Result<Self> {
        if lowpass.len() < 2 || lowpass.len() % 2 != 0 {
            return Err(Error::InvalidFilter(format!(
                "{name}: filter length {} must be even and at least 2",
                lowpass.len()
            )));
        }
        let sum: f64 = lowpass.iter().sum();
        if (sum - std::f64::consts::SQRT_2).abs() > QMF_TOLERANCE {
            return Err(Error::InvalidFilter(format!("{name}: coefficients sum to {sum}, expected sqrt(2)")));
        }
        let len = lowpass.len();
        for shift in (0..len).step_by(2) {
            let dot: f64 = (0..len - shift).map(|k| lowpass[k] * lowpass[k + shift]).sum();
            let expected = if shift == 0 { 1.0 } else { 0.0 };
            if (dot - expected).abs() > QMF_TOLERANCE {
                return Err(Error::InvalidFilter(format!(
                    "{name}: shift-{shift} autocorrelation is {dot}, expected {expected}"
                )));
            }
        }
        // g_k = (-1)^k h_{L-1-k}
        let highpass = (0..len)
            .map(|k| if k % 2 == 0 { lowpass[len - 1 - k] } else { -lowpass[len - 1 - k] })
            .collect();
        Ok(Self { name: name.to_string(), lowpass, highpass, n_vanishing_moments })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn lowpass(&self) -> &[f64] {
        &self.lowpass
    }

    pub fn highpass(&self) -> &[f64] {
        &self.highpass
    }

    pub fn n_vanishing_moments(&self) -> usize {
        self.n_vanishing_moments
    }

    /// Length of the support of φ and ψ, `2N - 1` for a filter with `2N` taps.
    pub fn support_length(&self) -> usize {
        self.lowpass.len() - 1
    }
}

/// Looks up a shipped filter by name (case-insensitive).
pub fn load_filter(name: &str) -> Result<WaveletFilter> {
    let wanted = name.trim().to_ascii_lowercase();
    let (name, coefs, moments) = TABLE
        .iter()
        .find(|(n, _, _)| *n == wanted)
        .ok_or_else(|| Error::UnknownFilter { name: name.to_string(), available: available_filters() })?;
    WaveletFilter::from_lowpass(name, coefs.to_vec(), *moments)
}

/// Serialized form of a filter: its table name.
#[derive(Serialize, Deserialize)]
struct FilterName(String);

impl TryFrom<FilterName> for WaveletFilter {
    type Error = Error;

    fn try_from(value: FilterName) -> Result<Self> {
        load_filter(&value.0)
    }
}

impl From<WaveletFilter> for FilterName {
    fn from(value: WaveletFilter) -> Self {
        FilterName(value.name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn haar_coefficients() {
        let f = load_filter("haar").unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(f.lowpass(), &[r, r]);
        assert_eq!(f.support_length(), 1);
    }

    #[test]
    fn sym10_has_twenty_taps() {
        let f = load_filter("sym10").unwrap();
        assert_eq!(f.lowpass().len(), 20);
        assert_eq!(f.support_length(), 19);
        assert_eq!(f.n_vanishing_moments(), 10);
    }

    #[test]
    fn every_shipped_filter_satisfies_qmf_invariants() {
        for name in available_filters() {
            let f = load_filter(name).unwrap();
            let sum: f64 = f.lowpass().iter().sum();
            assert!((sum - std::f64::consts::SQRT_2).abs() < 1e-12, "{name}");
            // highpass is orthogonal to lowpass at every even shift
            let len = f.lowpass().len() as isize;
            for m in (-len..=len).step_by(2) {
                let dot: f64 = (0..len)
                    .filter(|k| (0..len).contains(&(k + m)))
                    .map(|k| f.lowpass()[k as usize] * f.highpass()[(k + m) as usize])
                    .sum();
                assert!(dot.abs() < 1e-12, "{name} shift {m}: {dot}");
            }
        }
    }

    #[test]
    fn unknown_name_lists_available() {
        let err = load_filter("coif3").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("coif3") && msg.contains("sym10") && msg.contains("haar"));
    }

    #[test]
    fn rejects_non_orthonormal_filter() {
        assert!(WaveletFilter::from_lowpass("bad", vec![1.0, 0.414_213_562_373_095_1], 1).is_err());
    }
}
