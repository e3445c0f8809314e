use crate::field::ExtFieldElement;

/// An affine point of `E(F_{p^k})`, used for the second pairing argument.
///
/// Arithmetic here only serves to place evaluation points, so it is plain
/// affine and callers run it outside the ledger.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtPoint {
    pub(crate) xy: Option<(ExtFieldElement, ExtFieldElement)>,
}

impl ExtPoint {
    pub fn infinity() -> ExtPoint {
        ExtPoint { xy: None }
    }

    pub fn new(x: ExtFieldElement, y: ExtFieldElement) -> ExtPoint {
        ExtPoint { xy: Some((x, y)) }
    }

    pub fn is_infinity(&self) -> bool {
        self.xy.is_none()
    }

    pub fn coords(&self) -> Option<(&ExtFieldElement, &ExtFieldElement)> {
        self.xy.as_ref().map(|(x, y)| (x, y))
    }

    pub fn neg(&self) -> ExtPoint {
        ExtPoint {
            xy: self.xy.as_ref().map(|(x, y)| (x.clone(), y.neg())),
        }
    }

    /// Chord-and-tangent sum on `y^2 = x^3 + a4 x + a6`.
    pub fn add(&self, o: &ExtPoint, a4: &ExtFieldElement) -> ExtPoint {
        let ((x1, y1), (x2, y2)) = match (&self.xy, &o.xy) {
            (None, _) => return o.clone(),
            (_, None) => return self.clone(),
            (Some(a), Some(b)) => (a, b),
        };
        let lambda = if x1 == x2 {
            if y1 != y2 || y1.is_zero() {
                return ExtPoint::infinity();
            }
            let x1sq = x1.square();
            let num = x1sq.add(&x1sq).add(&x1sq).add(a4);
            let den = y1.add(y1);
            num.mul(&den.inv().expect("nonzero"))
        } else {
            y2.sub(y1).mul(&x2.sub(x1).inv().expect("nonzero"))
        };
        let x3 = lambda.square().sub(x1).sub(x2);
        let y3 = lambda.mul(&x1.sub(&x3)).sub(y1);
        ExtPoint::new(x3, y3)
    }

    pub fn is_on_curve(&self, a4: &ExtFieldElement, a6: &ExtFieldElement) -> bool {
        match &self.xy {
            None => true,
            Some((x, y)) => {
                let rhs = x.square().mul(x).add(&a4.mul(x)).add(a6);
                y.square() == rhs
            }
        }
    }
}
