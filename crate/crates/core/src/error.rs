use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid design parameters: {0}")]
    InvalidParams(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Target sits on an isolated singular point where every coefficient of
    /// the inverse-kinematics quartic vanishes.
    #[error("inverse-kinematics quartic is identically zero")]
    DegenerateQuartic,

    #[error("C1 radicand is negative ({radicand:e}) at d3={d3}, r2={r2}")]
    SurfaceDomain { d3: f64, r2: f64, radicand: f64 },

    #[error("aspect count unstable: {coarse} at grid {grid}, {fine} at grid {}", 2 * grid)]
    ResolutionInstability { grid: usize, coarse: usize, fine: usize },

    #[error("vanishing-speed point at ({rho:.6}, {z:.6}) fails the triple-root check (cluster width {width:.3e})")]
    CuspVerification { rho: f64, z: f64, width: f64 },

    #[error("tangential contact at ({rho:.6}, {z:.6}): tangent angle {angle:.3e} rad")]
    TangentialContact { rho: f64, z: f64, angle: f64 },

    #[error("node at ({rho:.6}, {z:.6}) fails the double-pair check")]
    NodeVerification { rho: f64, z: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
