//! Shared fixtures for the benchmark targets.

use lorcat_core::kinematics::Velocity;
use lorcat_core::vecmat::Vec3;
use lorcat_core::{FrameSpace, LightSpeed};

pub const C: LightSpeed = LightSpeed::NATURAL;

/// Deterministic subluminal velocities spread over directions.
pub fn sample_velocities(n: usize) -> Vec<Velocity> {
    (0..n)
        .map(|i| {
            let t = i as f64 + 0.5;
            let dir = Vec3::new(t.sin(), (1.7 * t).cos(), (0.9 * t).sin());
            let unit = dir * (1.0 / dir.norm());
            let speed = 0.1 + 0.85 * ((0.37 * t).sin().abs());
            Velocity::relativistic(unit * speed, C).unwrap()
        })
        .collect()
}

/// A frame space with `n` frames, the first at rest.
pub fn sample_space(n: usize) -> FrameSpace {
    let mut builder = FrameSpace::relativistic(C).frame("f0", Vec3::ZERO);
    for (i, v) in sample_velocities(n - 1).iter().enumerate() {
        builder = builder.frame(&format!("f{}", i + 1), v.vector());
    }
    builder.build().unwrap()
}
