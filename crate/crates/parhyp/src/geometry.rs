//! The mixed domain and its characteristic chart.
//!
//! The parabolic region is the open unit square with corners A(0,0),
//! A0(0,1), B0(1,1), B(1,0). The hyperbolic region is the triangle below
//! `y = 0` bounded by the characteristics `x + y = 0` and `x - y = 1`.
//! In characteristic coordinates `xi = x + y`, `eta = x - y` the triangle
//! becomes `0 < xi < eta < 1`.

/// Characteristic coordinates of a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharCoords {
    pub xi: f64,
    pub eta: f64,
}

pub fn to_char(x: f64, y: f64) -> CharCoords {
    CharCoords {
        xi: x + y,
        eta: x - y,
    }
}

pub fn from_char(c: CharCoords) -> (f64, f64) {
    (0.5 * (c.xi + c.eta), 0.5 * (c.xi - c.eta))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    Parabolic,
    Hyperbolic,
    TypeChangeLine,
    Outside,
}

/// Classify a point of the closed domain.
pub fn classify(x: f64, y: f64) -> Region {
    if y > 0.0 {
        if (0.0..=1.0).contains(&x) && y <= 1.0 {
            Region::Parabolic
        } else {
            Region::Outside
        }
    } else if y == 0.0 {
        if (0.0..=1.0).contains(&x) {
            Region::TypeChangeLine
        } else {
            Region::Outside
        }
    } else {
        let c = to_char(x, y);
        if c.xi >= 0.0 && c.eta <= 1.0 {
            Region::Hyperbolic
        } else {
            Region::Outside
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn corners() {
        assert_eq!(classify(0.5, 0.5), Region::Parabolic);
        assert_eq!(classify(0.5, -0.2), Region::Hyperbolic);
        assert_eq!(classify(0.5, -0.6), Region::Outside);
        assert_eq!(classify(0.2, 0.0), Region::TypeChangeLine);
        // the lowest vertex C = (1/2, -1/2)
        assert_eq!(classify(0.5, -0.5), Region::Hyperbolic);
    }

    proptest! {
        #[test]
        fn chart_round_trip(x in -1.0f64..2.0, y in -1.0f64..2.0) {
            let (x2, y2) = from_char(to_char(x, y));
            prop_assert!((x - x2).abs() < 1e-15);
            prop_assert!((y - y2).abs() < 1e-15);
        }

        #[test]
        fn triangle_maps_into_unit_simplex(xi in 0.0f64..1.0, d in 0.0f64..1.0) {
            // xi < eta < 1 corresponds to y < 0 between the characteristics
            let eta = xi + (1.0 - xi) * d;
            if eta > xi {
                let (x, y) = from_char(CharCoords { xi, eta });
                prop_assert!(y <= 0.0);
                prop_assert!(x + y >= -1e-15 && x - y <= 1.0 + 1e-15);
            }
        }
    }
}
