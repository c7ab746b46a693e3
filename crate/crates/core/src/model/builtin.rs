use super::{Expr, ModelError, SystemModel};

fn v(i: usize) -> Expr {
    Expr::var(i)
}

fn c(x: f64) -> Expr {
    Expr::constant(x)
}

/// Two-state rational system with additive disturbance and a linear
/// observation:
///
/// ```text
/// x1⁺ = 3 x1 − x1²/7 − 4 x1 x2 / (4 + x1) + w1
/// x2⁺ = −2 x2 + 3 x1 x2 / (4 + x1) + w2
/// y   = [x1; x2 − x1] + v
/// ```
pub fn example1() -> SystemModel {
    let (x1, x2, w1, w2) = (v(0), v(1), v(2), v(3));
    let f1 = c(3.0) * x1.clone()
        - x1.clone().powi(2) / c(7.0)
        - c(4.0) * x1.clone() * x2.clone() / (c(4.0) + x1.clone())
        + w1;
    let f2 = c(-2.0) * x2.clone() + c(3.0) * x1.clone() * x2.clone() / (c(4.0) + x1.clone()) + w2;
    let mu = vec![x1.clone(), x2 - x1];
    SystemModel::new("example1", 2, 2, vec![f1, f2], mu).expect("well-formed built-in model")
}

/// Parameters of the discretized unicycle.
#[derive(Debug, Clone, PartialEq)]
pub struct UnicycleParams {
    pub sampling_period: f64,
    pub linear_speed: f64,
    pub angular_speed: f64,
    pub landmarks: [(f64, f64); 2],
}

impl Default for UnicycleParams {
    fn default() -> Self {
        Self {
            sampling_period: 1.0,
            linear_speed: 0.3,
            angular_speed: 0.15,
            landmarks: [(-2.0, 0.0), (2.0, 2.0)],
        }
    }
}

/// Unicycle with state `(s_x, s_y, θ)` observed through range and bearing to
/// two landmarks:
///
/// ```text
/// s_x⁺ = s_x + T φ_w cos θ + w1
/// s_y⁺ = s_y + T φ_w sin θ + w2
/// θ⁺   = θ + T φ_θ + w3
/// y    = [d1, θ − atan((ly1 − s_y)/(lx1 − s_x)), d2, θ − atan((ly2 − s_y)/(lx2 − s_x))] + v
/// ```
pub fn unicycle(p: &UnicycleParams) -> Result<SystemModel, ModelError> {
    if !(p.sampling_period.is_finite() && p.linear_speed.is_finite() && p.angular_speed.is_finite())
    {
        return Err(ModelError::InvalidParameter(
            "non-finite unicycle parameter".into(),
        ));
    }
    let (sx, sy, th) = (v(0), v(1), v(2));
    let step = p.sampling_period;
    let f = vec![
        sx.clone() + c(step * p.linear_speed) * th.clone().cos() + v(3),
        sy.clone() + c(step * p.linear_speed) * th.clone().sin() + v(4),
        th.clone() + c(step * p.angular_speed) + v(5),
    ];
    let mut mu = Vec::new();
    for &(lx, ly) in &p.landmarks {
        let dx = c(lx) - sx.clone();
        let dy = c(ly) - sy.clone();
        mu.push((dx.clone().powi(2) + dy.clone().powi(2)).sqrt());
        mu.push(th.clone() - (dy / dx).atan());
    }
    SystemModel::new("unicycle", 3, 3, f, mu)
}
