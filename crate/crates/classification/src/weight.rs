//! Index weights driving the filtration grading.

use null_frame::FrameLabel;

/// Twice the weight of a frame label, so all arithmetic stays integral.
/// Even dimension: ±1 (true weights ±1/2).  Odd: ±2 and 0 (true ±1, 0).
pub fn doubled_weight(label: FrameLabel, epsilon: usize) -> i32 {
    let unit = if epsilon == 0 { 1 } else { 2 };
    match label {
        FrameLabel::Unprimed(_) => unit,
        FrameLabel::Tilde(_) => -unit,
        FrameLabel::Zero => {
            debug_assert!(epsilon == 1, "label 0 only exists in odd dimension");
            0
        }
    }
}

pub fn index_weight(label: FrameLabel, epsilon: usize) -> f64 {
    doubled_weight(label, epsilon) as f64 / 2.0
}
