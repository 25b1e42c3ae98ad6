//! The six-parameter set `A = {a, b, c, d, p, q}`, its auxiliary phase
//! functions and the weight families used by modulation-space norms.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SaftError};

/// Absolute slack allowed on `ad - bc = 1`.
pub const UNIMODULAR_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
struct RawParams {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    p: f64,
    q: f64,
}

/// Validated SAFT parameters. `b != 0` and `ad - bc = 1` hold for every value
/// of this type.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct SaftParams {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    p: f64,
    q: f64,
    omega: f64,
}

impl TryFrom<RawParams> for SaftParams {
    type Error = SaftError;

    fn try_from(r: RawParams) -> Result<Self> {
        SaftParams::new(r.a, r.b, r.c, r.d, r.p, r.q)
    }
}

impl From<SaftParams> for RawParams {
    fn from(s: SaftParams) -> Self {
        RawParams {
            a: s.a,
            b: s.b,
            c: s.c,
            d: s.d,
            p: s.p,
            q: s.q,
        }
    }
}

/// Named members of the SAFT family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpecialKind {
    Fourier,
    /// Fractional Fourier transform of angle `theta`.
    Frft(f64),
    /// Fresnel transform `{1, b, 0, 1, 0, 0}`.
    Fresnel(f64),
    /// Linear canonical transform (`p = q = 0`).
    Lct { a: f64, b: f64, c: f64, d: f64 },
}

impl SaftParams {
    /// Validates and builds a parameter set.
    pub fn new(a: f64, b: f64, c: f64, d: f64, p: f64, q: f64) -> Result<Self> {
        let all = [a, b, c, d, p, q];
        if let Some(i) = all.iter().position(|v| !v.is_finite()) {
            return Err(SaftError::InvalidParams(format!(
                "parameter #{i} is not finite"
            )));
        }
        if b == 0.0 {
            return Err(SaftError::InvalidParams(
                "b = 0: the transform is undefined".into(),
            ));
        }
        let det = a * d - b * c;
        if (det - 1.0).abs() > UNIMODULAR_TOL {
            return Err(SaftError::InvalidParams(format!(
                "ad - bc = {det} != 1"
            )));
        }
        Ok(SaftParams {
            a,
            b,
            c,
            d,
            p,
            q,
            omega: b * q - d * p,
        })
    }

    pub fn special(kind: SpecialKind) -> Result<Self> {
        match kind {
            SpecialKind::Fourier => Self::new(0.0, 1.0, -1.0, 0.0, 0.0, 0.0),
            SpecialKind::Frft(theta) => {
                let (s, c) = theta.sin_cos();
                // sin(k*pi) evaluates to ~1e-16, not 0.
                if s.abs() < 1e-12 {
                    return Err(SaftError::InvalidParams(format!(
                        "frft angle {theta} is a multiple of pi (b = sin theta = 0)"
                    )));
                }
                Self::new(c, s, -s, c, 0.0, 0.0)
            }
            SpecialKind::Fresnel(b) => Self::new(1.0, b, 0.0, 1.0, 0.0, 0.0),
            SpecialKind::Lct { a, b, c, d } => Self::new(a, b, c, d, 0.0, 0.0),
        }
    }

    pub fn fourier() -> Self {
        Self::special(SpecialKind::Fourier).expect("fourier parameters are valid")
    }

    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn b(&self) -> f64 {
        self.b
    }
    pub fn c(&self) -> f64 {
        self.c
    }
    pub fn d(&self) -> f64 {
        self.d
    }
    pub fn p(&self) -> f64 {
        self.p
    }
    pub fn q(&self) -> f64 {
        self.q
    }
    /// `Omega = bq - dp`.
    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn as_array(&self) -> [f64; 6] {
        [self.a, self.b, self.c, self.d, self.p, self.q]
    }

    /// Chirp rate `a/b` used by `C_{a/b}`.
    pub fn chirp_rate(&self) -> f64 {
        self.a / self.b
    }

    /// `rho_A(t) = exp(pi i/b (a t^2 + 2 p t))`.
    pub fn rho(&self, t: f64) -> Complex64 {
        Complex64::cis(PI / self.b * (self.a * t * t + 2.0 * self.p * t))
    }

    /// `eta_A(w) = exp(pi i/b (d w^2 + 2 Omega w))`.
    pub fn eta(&self, w: f64) -> Complex64 {
        Complex64::cis(PI / self.b * (self.d * w * w + 2.0 * self.omega * w))
    }

    /// `lambda_A(t) = exp(pi i a t^2 / b)`.
    pub fn lambda(&self, t: f64) -> Complex64 {
        Complex64::cis(PI / self.b * self.a * t * t)
    }

    /// True when all of `a, b, c, d` are integers and `p = q = 0`.
    pub fn is_integer_lct(&self) -> bool {
        let int = |v: f64| (v - v.round()).abs() < 1e-12;
        int(self.a) && int(self.b) && int(self.c) && int(self.d) && self.p == 0.0 && self.q == 0.0
    }

    /// Extreme eigenvalues of the quadratic form
    /// `[[c^2+d^2, -(ac+bd)], [-(ac+bd), a^2+b^2]]`, closed form.
    pub fn weight_equivalence_constants(&self) -> (f64, f64) {
        let (a, b, c, d) = (self.a, self.b, self.c, self.d);
        let p = c * c + d * d;
        let q = a * a + b * b;
        let r = -(a * c + b * d);
        let mean = 0.5 * (p + q);
        let rad = (0.25 * (p - q) * (p - q) + r * r).sqrt();
        (mean - rad, mean + rad)
    }
}

impl fmt::Display for SaftParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{{a={}, b={}, c={}, d={}, p={}, q={}}}",
            self.a, self.b, self.c, self.d, self.p, self.q
        )
    }
}

/// Accepts `fourier`, `frft:THETA`, `fresnel:B`, `lct:a,b,c,d` or `a,b,c,d,p,q`.
impl FromStr for SaftParams {
    type Err = SaftError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let num = |t: &str| -> Result<f64> {
            t.trim()
                .parse::<f64>()
                .map_err(|_| SaftError::InvalidParams(format!("cannot parse number '{t}'")))
        };
        if s.eq_ignore_ascii_case("fourier") {
            return Self::special(SpecialKind::Fourier);
        }
        if let Some(rest) = s.strip_prefix("frft:") {
            return Self::special(SpecialKind::Frft(parse_angle(rest)?));
        }
        if let Some(rest) = s.strip_prefix("fresnel:") {
            return Self::special(SpecialKind::Fresnel(num(rest)?));
        }
        if let Some(rest) = s.strip_prefix("lct:") {
            let v = rest.split(',').map(num).collect::<Result<Vec<_>>>()?;
            if v.len() != 4 {
                return Err(SaftError::InvalidParams("lct needs a,b,c,d".into()));
            }
            return Self::special(SpecialKind::Lct {
                a: v[0],
                b: v[1],
                c: v[2],
                d: v[3],
            });
        }
        let v = s.split(',').map(num).collect::<Result<Vec<_>>>()?;
        if v.len() != 6 {
            return Err(SaftError::InvalidParams(format!(
                "expected fourier | frft:THETA | fresnel:B | a,b,c,d,p,q, got '{s}'"
            )));
        }
        Self::new(v[0], v[1], v[2], v[3], v[4], v[5])
    }
}

/// Parses an angle, accepting plain numbers and `pi/4`, `3pi/4`, `pi` forms.
pub fn parse_angle(s: &str) -> Result<f64> {
    let s = s.trim().to_ascii_lowercase();
    let err = || SaftError::InvalidParams(format!("cannot parse angle '{s}'"));
    if let Some(idx) = s.find("pi") {
        let coef = &s[..idx];
        let coef = match coef.trim() {
            "" => 1.0,
            "-" => -1.0,
            c => c.trim_end_matches('*').parse::<f64>().map_err(|_| err())?,
        };
        let rest = s[idx + 2..].trim();
        let denom = if rest.is_empty() {
            1.0
        } else {
            rest.strip_prefix('/')
                .ok_or_else(err)?
                .trim()
                .parse::<f64>()
                .map_err(|_| err())?
        };
        return Ok(coef * PI / denom);
    }
    s.parse::<f64>().map_err(|_| err())
}

/// Weight functions on the time-frequency plane.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WeightSpec {
    Unit,
    /// `(1 + x^2 + w^2)^(ell/2)`.
    VEll { ell: f64 },
    /// `(1 + (c^2+d^2) x^2 + (a^2+b^2) w^2 - 2(ac+bd) x w)^(ell/2)`.
    WEll { ell: f64, params: SaftParams },
    /// `m_b(x, w) = m(x, b w)`.
    MB { inner: Box<WeightSpec>, b: f64 },
    /// `nu_s(x, w) = m(x, w - s x)`.
    NuS { inner: Box<WeightSpec>, s: f64 },
}

impl WeightSpec {
    pub fn v_ell(ell: f64) -> Self {
        WeightSpec::VEll { ell }
    }

    pub fn w_ell(ell: f64, params: SaftParams) -> Self {
        WeightSpec::WEll { ell, params }
    }

    pub fn m_b(inner: WeightSpec, b: f64) -> Self {
        WeightSpec::MB {
            inner: Box::new(inner),
            b,
        }
    }

    pub fn nu_s(inner: WeightSpec, s: f64) -> Self {
        WeightSpec::NuS {
            inner: Box::new(inner),
            s,
        }
    }

    pub fn eval(&self, x: f64, w: f64) -> f64 {
        match self {
            WeightSpec::Unit => 1.0,
            WeightSpec::VEll { ell } => (1.0 + x * x + w * w).powf(0.5 * ell),
            WeightSpec::WEll { ell, params } => {
                let (a, b, c, d) = (params.a, params.b, params.c, params.d);
                let form = 1.0 + (c * c + d * d) * x * x + (a * a + b * b) * w * w
                    - 2.0 * (a * c + b * d) * x * w;
                form.powf(0.5 * ell)
            }
            WeightSpec::MB { inner, b } => inner.eval(x, b * w),
            WeightSpec::NuS { inner, s } => inner.eval(x, w - s * x),
        }
    }

    pub fn is_unit(&self) -> bool {
        match self {
            WeightSpec::Unit => true,
            WeightSpec::VEll { ell } | WeightSpec::WEll { ell, .. } => *ell == 0.0,
            WeightSpec::MB { inner, .. } | WeightSpec::NuS { inner, .. } => inner.is_unit(),
        }
    }
}

impl FromStr for WeightSpec {
    type Err = SaftError;

    /// `unit`, `v_ell:L`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "unit" {
            return Ok(WeightSpec::Unit);
        }
        if let Some(rest) = s.strip_prefix("v_ell:") {
            let ell: f64 = rest
                .parse()
                .map_err(|_| SaftError::InvalidArgument(format!("bad ell '{rest}'")))?;
            if ell < 0.0 {
                return Err(SaftError::InvalidArgument("ell must be >= 0".into()));
            }
            return Ok(WeightSpec::VEll { ell });
        }
        Err(SaftError::InvalidArgument(format!(
            "unknown weight '{s}' (expected unit | v_ell:L)"
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fourier_params_have_zero_omega() {
        let p = SaftParams::new(0.0, 1.0, -1.0, 0.0, 0.0, 0.0).unwrap();
        assert_eq!(p.omega(), 0.0);
        assert_eq!(p, SaftParams::fourier());
    }

    #[test]
    fn frft_quarter_pi_is_valid() {
        let t = PI / 4.0;
        assert!(SaftParams::new(t.cos(), t.sin(), -t.sin(), t.cos(), 0.0, 0.0).is_ok());
    }

    #[test]
    fn rejects_bad_determinant_and_zero_b() {
        assert!(matches!(
            SaftParams::new(1.0, 1.0, 1.0, 1.0, 0.0, 0.0),
            Err(SaftError::InvalidParams(_))
        ));
        assert!(SaftParams::new(1.0, 0.0, 0.0, 1.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn special_kinds() {
        let p = SaftParams::special(SpecialKind::Frft(PI / 2.0)).unwrap();
        assert!(p.a().abs() < 1e-15 && p.d().abs() < 1e-15);
        assert_eq!((p.b(), p.c()), (1.0, -1.0));
        let f = SaftParams::special(SpecialKind::Fresnel(2.0)).unwrap();
        assert_eq!(f.as_array(), [1.0, 2.0, 0.0, 1.0, 0.0, 0.0]);
        assert!(SaftParams::special(SpecialKind::Frft(PI)).is_err());
        assert!(SaftParams::special(SpecialKind::Fresnel(0.0)).is_err());
    }

    #[test]
    fn phases() {
        let f = SaftParams::fourier();
        for t in [-3.0, 0.0, 0.5, 7.25] {
            assert!((f.rho(t) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        }
        let p: SaftParams = "1,2,-2,-3,0.3,-0.2".parse().unwrap();
        assert!((p.eta(0.0) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!((p.lambda(3.7).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn weights() {
        assert_eq!(WeightSpec::v_ell(2.0).eval(0.0, 0.0), 1.0);
        assert!((WeightSpec::v_ell(2.0).eval(1.0, 1.0) - 3.0).abs() < 1e-14);
        let w = WeightSpec::w_ell(2.0, SaftParams::fourier());
        for (x, om) in [(0.3, -1.2), (2.0, 5.0)] {
            assert!((w.eval(x, om) - (1.0 + x * x + om * om)).abs() < 1e-12);
        }
        let mb = WeightSpec::m_b(WeightSpec::v_ell(2.0), 2.0);
        assert!((mb.eval(1.0, 1.0) - 6.0).abs() < 1e-12);
        let nu = WeightSpec::nu_s(WeightSpec::v_ell(2.0), 1.0);
        assert!((nu.eval(1.0, 1.0) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn parse_forms() {
        let p: SaftParams = "frft:pi/4".parse().unwrap();
        assert!((p.a() - (PI / 4.0).cos()).abs() < 1e-15);
        assert_eq!("fresnel:2".parse::<SaftParams>().unwrap().b(), 2.0);
        assert!("1,1,1,1,0,0".parse::<SaftParams>().is_err());
        assert!("frft:pi".parse::<SaftParams>().is_err());
        assert_eq!(parse_angle("3pi/4").unwrap(), 3.0 * PI / 4.0);
    }

    #[test]
    fn json_is_flat_and_validated() {
        let p: SaftParams = "1,2,-2,-3,0.3,-0.2".parse().unwrap();
        let js = serde_json::to_string(&p).unwrap();
        assert_eq!(js, r#"{"a":1.0,"b":2.0,"c":-2.0,"d":-3.0,"p":0.3,"q":-0.2}"#);
        let back: SaftParams = serde_json::from_str(&js).unwrap();
        assert_eq!(back, p);
        assert!(serde_json::from_str::<SaftParams>(r#"{"a":1,"b":1,"c":1,"d":1,"p":0,"q":0}"#).is_err());
    }
}
