use std::fmt;

pub use num_complex::Complex64 as Complex;

/// Serde adapter that writes a complex number as `[re, im]`.
pub(crate) mod pair {
    use super::Complex;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(z: &Complex, s: S) -> Result<S::Ok, S::Error> {
        [z.re, z.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(Complex::new(re, im))
    }

    pub mod vec {
        use super::Complex;
        use serde::{Deserialize, Deserializer, Serialize, Serializer};

        pub fn serialize<S: Serializer>(zs: &[Complex], s: S) -> Result<S::Ok, S::Error> {
            zs.iter()
                .map(|z| [z.re, z.im])
                .collect::<Vec<_>>()
                .serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Complex>, D::Error> {
            let raw = Vec::<[f64; 2]>::deserialize(d)?;
            Ok(raw
                .into_iter()
                .map(|[re, im]| Complex::new(re, im))
                .collect())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse complex number from {0:?} (expected forms like 0.5, 2i, 1-0.25i)")]
pub struct ParseComplexError(pub String);

/// Parses the `a+bi` syntax used on the command line.
///
/// Accepts a lone real (`-1.5`), a lone imaginary (`2i`, `-i`) or a sum
/// (`0.31+1.27i`, `1e-3-2i`).
pub fn parse_complex(text: &str) -> Result<Complex, ParseComplexError> {
    let err = || ParseComplexError(text.to_string());
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(err());
    }
    let Some(body) = s.strip_suffix('i') else {
        return s
            .parse::<f64>()
            .map(|re| Complex::new(re, 0.0))
            .map_err(|_| err());
    };
    // Find the sign separating the real and imaginary parts, skipping exponent signs.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let imag = |t: &str| -> Result<f64, ParseComplexError> {
        match t {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => t.parse::<f64>().map_err(|_| err()),
        }
    };
    match split {
        Some(k) => {
            let re = body[..k].parse::<f64>().map_err(|_| err())?;
            Ok(Complex::new(re, imag(&body[k..])?))
        }
        None => Ok(Complex::new(0.0, imag(body)?)),
    }
}

/// Display wrapper printing `a+bi` in the same syntax [`parse_complex`] reads.
pub struct Show(pub Complex);

impl fmt::Display for Show {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Complex { re, im } = self.0;
        let prec = f.precision().unwrap_or(12);
        if im >= 0.0 || im.is_nan() {
            write!(f, "{re:.prec$}+{im:.prec$}i")
        } else {
            write!(f, "{re:.prec$}-{:.prec$}i", -im)
        }
    }
}
