use super::frame::Configuration;
use super::rotation::Rot3;
use super::segment::{segment_rotation, Segment, SegmentKind, TurnGeometry};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// One point of a sampled path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathSample<T> {
    /// Arc length from the start, unit sphere.
    pub s: T,
    pub config: Configuration<T>,
    pub frame: Rot3<T>,
    /// Segment the sample lies on; a boundary sample belongs to the segment it closes.
    pub segment_index: usize,
}

/// Samples a path in closed form at multiples of `step` plus every segment
/// boundary and the end point.
pub fn sample_path<T: Real>(
    start: &Configuration<T>,
    segments: &[Segment<T>],
    geom: &TurnGeometry<T>,
    step: T,
) -> Result<Vec<PathSample<T>>> {
    if !(step > T::zero()) {
        return Err(Error::InvalidInput(format!("sample step must be positive, got {}", step)));
    }
    let start_frame = start.frame();
    let lengths: Vec<T> = segments.iter().map(|s| s.unit_length(geom)).collect();
    let total = lengths.iter().fold(T::zero(), |a, &b| a + b);

    let live: Vec<usize> = (0..segments.len()).filter(|&i| lengths[i] > T::zero()).collect();
    if live.is_empty() {
        return Ok(vec![PathSample {
            s: T::zero(),
            config: *start,
            frame: start_frame,
            segment_index: 0,
        }]);
    }

    // frame at the start of each segment, and cumulative arc length
    let mut heads = Vec::with_capacity(segments.len());
    let mut offsets = Vec::with_capacity(segments.len());
    let mut acc = start_frame;
    let mut s0 = T::zero();
    for (seg, &len) in segments.iter().zip(&lengths) {
        heads.push(acc);
        offsets.push(s0);
        acc = acc * segment_rotation(seg.kind, seg.angle(), geom);
        s0 = s0 + len;
    }

    let merge_tol = T::tol(1e-12) * total.max(T::one());
    let mut points: Vec<T> = Vec::new();
    let mut k = 0usize;
    loop {
        let s = step * T::lit(k as f64);
        if s > total + merge_tol {
            break;
        }
        points.push(s.min(total));
        k += 1;
    }
    for &i in &live {
        points.push(offsets[i] + lengths[i]);
    }
    points.sort_by(|a, b| a.partial_cmp(b).expect("finite arc lengths"));
    points.dedup_by(|b, a| (*b - *a).abs() <= merge_tol);
    if let Some(last) = points.last_mut() {
        if (total - *last).abs() <= merge_tol {
            *last = total;
        }
    }

    let mut out = Vec::with_capacity(points.len());
    let mut cursor = 0usize;
    for s in points {
        while cursor + 1 < live.len() && s > offsets[live[cursor]] + lengths[live[cursor]] + merge_tol {
            cursor += 1;
        }
        let i = live[cursor];
        let seg = &segments[i];
        let along = (s - offsets[i]).max(T::zero()).min(lengths[i]);
        let angle = match seg.kind {
            SegmentKind::G => along,
            _ => along / geom.r(),
        };
        let frame = if along == lengths[i] {
            heads[i] * segment_rotation(seg.kind, seg.angle(), geom)
        } else {
            heads[i] * segment_rotation(seg.kind, angle, geom)
        };
        out.push(PathSample {
            s,
            config: Configuration::from_frame(&frame)?,
            frame,
            segment_index: i,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinematics::segment::compose_path;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn great_semicircle_in_quarter_steps() {
        let g = TurnGeometry::from_radius(0.5).unwrap();
        let start = Configuration::canonical();
        let samples = sample_path(&start, &[Segment::new(SegmentKind::G, PI)], &g, FRAC_PI_2).unwrap();
        assert_eq!(samples.len(), 3);
        let mid = samples[1].config.position();
        // rotation of e1 by π/2 about N = e3
        assert!(mid.get().max_abs_diff(crate::kinematics::Vec3::new(0.0, 1.0, 0.0)) < 1e-15);
    }

    #[test]
    fn empty_path_is_single_sample() {
        let g = TurnGeometry::from_radius(0.5).unwrap();
        let start = Configuration::canonical();
        let samples = sample_path::<f64>(&start, &[], &g, 0.1).unwrap();
        assert_eq!(samples.len(), 1);
        assert_eq!(samples[0].config, start);
    }

    #[test]
    fn end_frame_matches_composition() {
        let g = TurnGeometry::from_radius(0.71).unwrap();
        let segs = [
            Segment::new(SegmentKind::R, 0.7),
            Segment::new(SegmentKind::L, PI),
            Segment::new(SegmentKind::R, 0.7),
        ];
        let start = Configuration::canonical();
        let samples = sample_path(&start, &segs, &g, 0.05).unwrap();
        let last = samples.last().unwrap();
        assert!(last.frame.max_abs_diff(&(start.frame() * compose_path(&segs, &g))) < 1e-9);
        assert_eq!(last.segment_index, 2);
    }

    #[test]
    fn boundaries_are_always_sampled() {
        let g = TurnGeometry::from_radius(0.5).unwrap();
        let segs = [Segment::new(SegmentKind::L, 1.0f64), Segment::new(SegmentKind::G, 0.3)];
        let samples = sample_path(&Configuration::canonical(), &segs, &g, 0.2).unwrap();
        assert!(samples.iter().any(|p| (p.s - 0.5).abs() < 1e-15 && p.segment_index == 0));
        assert!((samples.last().unwrap().s - 0.8).abs() < 1e-15);
    }

    #[test]
    fn zero_step_rejected() {
        let g = TurnGeometry::from_radius(0.5).unwrap();
        assert!(sample_path::<f64>(&Configuration::canonical(), &[], &g, 0.0).is_err());
    }
}
