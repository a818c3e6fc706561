//! Numerical laboratory for a boundary value problem for the mixed
//! parabolic-hyperbolic equation
//!
//! ```text
//!   u_x  - u_yy = f(x, y),   y > 0   (heat region, unit square)
//!   u_xx - u_yy = f(x, y),   y < 0   (wave region, characteristic triangle)
//! ```
//!
//! with zero data on the left and top sides of the square, a characteristic
//! condition `u_x + u_y = 0` on `x - y = 1`, and the integral transmitting
//! condition on the type-change line `y = 0`:
//!
//! ```text
//!   u_x(x,+0) = u_x(x,-0),
//!   u_y(x,+0) = alpha * u_y(x,-0) - beta * int_0^x u_y(t,-0) dt.
//! ```
//!
//! The crate builds the strong solution through a Dirichlet heat-kernel
//! image series, a weakly singular Volterra equation for the trace
//! derivative, and the resolvent machinery; it evaluates the solution
//! kernel `K(x,y; x1,y1)`, computes the trace of the squared inverse
//! operator two ways, and estimates eigenvalues by a Nystrom
//! discretization.

pub mod cli;
pub mod config;
pub mod error;
pub mod geometry;
pub mod grid;
pub mod heat_kernel;
pub mod kernel;
pub mod problem;
pub mod quad;
pub mod source;
pub mod special;
pub mod spectral;
pub mod volterra;

pub use error::Error;
pub type Result<T> = std::result::Result<T, Error>;
