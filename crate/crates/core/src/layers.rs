//! Layer classification of a hetero-functional graph.
//!
//! A layer is a subset of capabilities picked out by a classification
//! criterion. Operand-set schemes classify by the input (or output)
//! operand set of each capability's process, which yields mutually
//! exclusive, collectively exhaustive layers; a custom scheme maps
//! capabilities to caller-defined classes (the dynamic-device-model case).

use std::collections::{BTreeMap, BTreeSet};

use crate::boolmat::{matricize, n_mode_bool, BoolMatrix, BoolTensor};
use crate::error::{Error, Result};
use crate::incidence::{adjacency_from_incidence, IncidenceTensors};
use crate::model::{codes, CapabilitySet, SystemModel};

/// How capabilities are assigned to layers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LayerScheme {
    /// Group by the input operand set of the capability's process.
    InputOperandSet,
    /// Group by the output operand set.
    OutputOperandSet,
    /// Explicit map from `(process, resource)` pairs to layer names; must
    /// cover every capability.
    Custom(BTreeMap<(usize, usize), String>),
}

/// One layer: its selector matrix, projector, member capabilities, and
/// per-layer adjacency.
#[derive(Debug, Clone, PartialEq)]
pub struct Layer {
    /// Dense index assigned in enumeration order.
    pub index: usize,
    /// Canonical operand-set index in `1..=2^sigma(L)`; `None` for custom
    /// schemes.
    pub canonical: Option<u64>,
    /// Operand membership bit vector (`bits[i]` set iff operand `i` is in
    /// the layer's operand set); `None` for custom schemes.
    pub bits: Option<Vec<bool>>,
    /// Human-readable label: the operand set or the custom class name.
    pub label: String,
    /// Selector matrix over `sigma(P) x sigma(R)`.
    pub selector: BoolMatrix,
    /// Projector onto the layer's capabilities, one basis row each.
    pub projector: BoolMatrix,
    /// Member capabilities as psi indices into the full capability set.
    pub members: Vec<usize>,
    /// Per-layer projected adjacency via the incidence route.
    pub adjacency: BoolMatrix,
}

/// The enumerated layers of one model under one scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct LayerSet {
    pub scheme: LayerScheme,
    pub layers: Vec<Layer>,
}

/// Encodes an operand bit vector as the canonical layer index, with
/// operand 0 as the least significant bit. The empty set maps to 1 and the
/// full set to `2^sigma(L)`.
pub fn encode_layer_bits(bits: &[bool]) -> u64 {
    1 + bits
        .iter()
        .enumerate()
        .filter(|&(_, &b)| b)
        .map(|(i, _)| 1u64 << i)
        .sum::<u64>()
}

/// Inverse of [`encode_layer_bits`].
pub fn decode_layer_bits(canonical: u64, n_operands: usize) -> Result<Vec<bool>> {
    if canonical == 0 || canonical > 1u64 << n_operands {
        return Err(Error::IndexOutOfRange(format!(
            "canonical layer index {canonical} outside 1..=2^{n_operands}"
        )));
    }
    let mask = canonical - 1;
    Ok((0..n_operands).map(|i| mask & (1 << i) != 0).collect())
}

/// Selector matrix of an operand-set layer: `Lambda(w, v) = 1` for all
/// resources when process `w`'s operand column equals the layer's bit
/// vector.
pub fn layer_selector(bits: &[bool], m_lp: &BoolMatrix, n_resources: usize) -> Result<BoolMatrix> {
    if bits.len() != m_lp.n_rows() {
        return Err(Error::DimensionMismatch {
            context: "layer selector",
            left: format!("{} bits", bits.len()),
            right: format!("{} operand rows", m_lp.n_rows()),
        });
    }
    let n_p = m_lp.n_cols();
    let mut column_sets: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n_p];
    for (i, w) in m_lp.iter() {
        column_sets[w].insert(i);
    }
    let wanted: BTreeSet<usize> = bits
        .iter()
        .enumerate()
        .filter(|&(_, &b)| b)
        .map(|(i, _)| i)
        .collect();
    let entries = column_sets
        .iter()
        .enumerate()
        .filter(|(_, set)| **set == wanted)
        .flat_map(|(w, _)| (0..n_resources).map(move |v| (w, v)));
    BoolMatrix::from_entries(n_p, n_resources, entries)
}

/// Projector of a layer: one elementary basis row per capability selected
/// by the layer. The selector is intersected with the system concept so
/// that rows address actual capabilities; an empty layer yields a
/// projector with zero rows.
pub fn layer_projector(selector: &BoolMatrix, a_s: &BoolMatrix) -> Result<BoolMatrix> {
    if selector.shape() != a_s.shape() {
        return Err(Error::DimensionMismatch {
            context: "layer projector",
            left: format!("{}x{}", selector.n_rows(), selector.n_cols()),
            right: format!("{}x{}", a_s.n_rows(), a_s.n_cols()),
        });
    }
    let n_p = a_s.n_rows();
    let selected = selector.and(a_s)?;
    let mut chis: Vec<usize> = selected.iter().map(|(w, v)| n_p * v + w).collect();
    chis.sort_unstable();
    BoolMatrix::from_entries(
        chis.len(),
        n_p * a_s.n_cols(),
        chis.into_iter().enumerate(),
    )
}

/// Per-layer incidence tensors and adjacency: the unprojected third-order
/// tensors are contracted onto the layer's capabilities, matricized, and
/// multiplied.
pub fn layer_incidence_and_adjacency(
    projector: &BoolMatrix,
    m3u_minus: &BoolTensor,
    m3u_plus: &BoolTensor,
) -> Result<(BoolTensor, BoolTensor, BoolMatrix)> {
    let p_t = projector.transpose();
    let minus = n_mode_bool(m3u_minus, &p_t, 2)?;
    let plus = n_mode_bool(m3u_plus, &p_t, 2)?;
    let m2_minus = matricize(&minus, &[0, 1], &[2])?;
    let m2_plus = matricize(&plus, &[0, 1], &[2])?;
    let adjacency = adjacency_from_incidence(&m2_plus, &m2_minus)?;
    Ok((minus, plus, adjacency))
}

fn operand_set_label(bits: &[bool], model: &SystemModel) -> String {
    let names: Vec<&str> = bits
        .iter()
        .enumerate()
        .filter(|&(_, &b)| b)
        .map(|(i, _)| model.operands()[i].id.as_str())
        .collect();
    if names.is_empty() {
        "{}".to_string()
    } else {
        format!("{{{}}}", names.join(","))
    }
}

impl LayerSet {
    /// Enumerates the layers of a model under a scheme and computes every
    /// per-layer artifact. Only layers that are actually present (schemes
    /// over operand sets: sets that occur as some process's column) are
    /// produced.
    pub fn build(
        model: &SystemModel,
        a_s: &BoolMatrix,
        caps: &CapabilitySet,
        tensors: &IncidenceTensors,
        scheme: LayerScheme,
    ) -> Result<LayerSet> {
        caps.verify_against(a_s)?;
        let inc = crate::incidence::OperandIncidence::build(model);
        let n_l = model.n_operands();
        let n_p = model.n_processes();

        let mut layers = Vec::new();
        match &scheme {
            LayerScheme::InputOperandSet | LayerScheme::OutputOperandSet => {
                let m_lp = match &scheme {
                    LayerScheme::InputOperandSet => &inc.m_lp_minus,
                    _ => &inc.m_lp_plus,
                };
                // Distinct process columns, ordered by canonical index.
                let mut column_sets: Vec<Vec<bool>> = vec![vec![false; n_l]; n_p];
                for (i, w) in m_lp.iter() {
                    column_sets[w][i] = true;
                }
                let mut distinct: BTreeMap<u64, Vec<bool>> = BTreeMap::new();
                for bits in column_sets {
                    distinct.entry(encode_layer_bits(&bits)).or_insert(bits);
                }
                for (index, (canonical, bits)) in distinct.into_iter().enumerate() {
                    let selector = layer_selector(&bits, m_lp, model.n_resources())?;
                    let layer = Self::finish_layer(
                        index,
                        Some(canonical),
                        Some(bits.clone()),
                        operand_set_label(&bits, model),
                        selector,
                        a_s,
                        caps,
                        tensors,
                    )?;
                    layers.push(layer);
                }
            }
            LayerScheme::Custom(map) => {
                // The map must be a total function on capabilities.
                let mut by_label: BTreeMap<String, Vec<(usize, usize)>> = BTreeMap::new();
                for (&(w, v), label) in map {
                    if !a_s.get(w, v) {
                        return Err(Error::Validation {
                            code: codes::LAYER_PARTITION,
                            message: format!(
                                "custom layer map names ({w}, {v}) which is not a capability"
                            ),
                        });
                    }
                    by_label.entry(label.clone()).or_default().push((w, v));
                }
                let mapped: usize = by_label.values().map(|v| v.len()).sum();
                if mapped != caps.len() {
                    return Err(Error::Validation {
                        code: codes::LAYER_PARTITION,
                        message: format!(
                            "custom layer map covers {mapped} of {} capabilities",
                            caps.len()
                        ),
                    });
                }
                for (index, (label, pairs)) in by_label.into_iter().enumerate() {
                    let selector =
                        BoolMatrix::from_entries(n_p, model.n_resources(), pairs)?;
                    let layer = Self::finish_layer(
                        index, None, None, label, selector, a_s, caps, tensors,
                    )?;
                    layers.push(layer);
                }
            }
        }
        Ok(LayerSet { scheme, layers })
    }

    #[allow(clippy::too_many_arguments)]
    fn finish_layer(
        index: usize,
        canonical: Option<u64>,
        bits: Option<Vec<bool>>,
        label: String,
        selector: BoolMatrix,
        a_s: &BoolMatrix,
        caps: &CapabilitySet,
        tensors: &IncidenceTensors,
    ) -> Result<Layer> {
        let projector = layer_projector(&selector, a_s)?;
        let members: Vec<usize> = selector
            .and(a_s)?
            .iter()
            .map(|(w, v)| {
                caps.psi_of(w, v)
                    .expect("selected pairs are capabilities after intersection")
            })
            .collect();
        let mut members = members;
        members.sort_unstable();
        let (_, _, adjacency) =
            layer_incidence_and_adjacency(&projector, &tensors.m3u_minus, &tensors.m3u_plus)?;
        Ok(Layer {
            index,
            canonical,
            bits,
            label,
            selector,
            projector,
            members,
            adjacency,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ModelSpec, Operand, ProcessDef, Resource, ResourceKind};

    fn m(rows: &[&[u8]]) -> BoolMatrix {
        BoolMatrix::from_rows(rows).unwrap()
    }

    fn toy_model() -> SystemModel {
        SystemModel::new(ModelSpec {
            operands: vec![Operand::new("water")],
            machines: vec![Resource::new("m1", ResourceKind::Machine)],
            independent_buffers: vec![Resource::new("b1", ResourceKind::IndependentBuffer)],
            transporters: vec![Resource::new("h1", ResourceKind::Transporter)],
            transform: vec![ProcessDef::new("treat", [0], [0])],
            holding: vec![ProcessDef::new("hold-water", [0], [0])],
            j_m: Some(m(&[&[1]])),
            j_gamma: Some(m(&[&[1, 1, 1]])),
            j_h: Some(m(&[&[1, 0, 0], &[0, 0, 1], &[0, 0, 0], &[0, 1, 0]])),
            ..ModelSpec::default()
        })
        .unwrap()
    }

    fn toy_artifacts() -> (SystemModel, BoolMatrix, CapabilitySet, IncidenceTensors) {
        let model = toy_model();
        let a_s = model.a_s();
        let caps = CapabilitySet::from_concept(&a_s);
        let tensors = IncidenceTensors::build(&model, &a_s, &caps).unwrap();
        (model, a_s, caps, tensors)
    }

    #[test]
    fn bit_encoding_roundtrip() {
        for canonical in 1..=16u64 {
            let bits = decode_layer_bits(canonical, 4).unwrap();
            assert_eq!(encode_layer_bits(&bits), canonical);
        }
        assert!(decode_layer_bits(0, 2).is_err());
        assert!(decode_layer_bits(5, 2).is_err());
    }

    #[test]
    fn toy_single_layer() {
        let (_, a_s, caps, tensors) = toy_artifacts();
        let model = toy_model();
        let set = LayerSet::build(&model, &a_s, &caps, &tensors, LayerScheme::InputOperandSet)
            .unwrap();
        assert_eq!(set.layers.len(), 1);
        let layer = &set.layers[0];
        assert_eq!(layer.bits.as_deref(), Some(&[true][..]));
        // Every process consumes water, so the selector is all-ones.
        assert_eq!(layer.selector, BoolMatrix::ones(5, 3));
        // Full-cover layer: projector equals the capability projector and
        // the layer adjacency is the whole projected adjacency.
        assert_eq!(&layer.projector, caps.projector());
        let full = adjacency_from_incidence(&tensors.m2_plus, &tensors.m2_minus).unwrap();
        assert_eq!(layer.adjacency, full);
        assert_eq!(layer.members, vec![0, 1, 2, 3]);
    }

    #[test]
    fn selector_with_unmatched_bits_is_zero() {
        let (model, _, _, _) = toy_artifacts();
        let inc = crate::incidence::OperandIncidence::build(&model);
        let selector = layer_selector(&[false], &inc.m_lp_minus, 3).unwrap();
        assert!(selector.is_empty());
    }

    #[test]
    fn selectors_stack_to_all_ones() {
        let (model, a_s, caps, tensors) = toy_artifacts();
        let set = LayerSet::build(&model, &a_s, &caps, &tensors, LayerScheme::InputOperandSet)
            .unwrap();
        let mut stacked = BoolMatrix::zeros(5, 3);
        for layer in &set.layers {
            stacked = stacked.or(&layer.selector).unwrap();
        }
        assert_eq!(stacked, BoolMatrix::ones(5, 3));
    }

    #[test]
    fn empty_layer_projector_has_zero_rows() {
        let (_, a_s, _, _) = toy_artifacts();
        let selector = BoolMatrix::zeros(5, 3);
        let p = layer_projector(&selector, &a_s).unwrap();
        assert_eq!(p.shape(), (0, 15));
    }

    #[test]
    fn two_disjoint_subsystems_two_layers() {
        // Water subsystem on b1<->b2, power subsystem on b3<->b4, with
        // dedicated holding processes and transporters.
        let model = SystemModel::new(ModelSpec {
            operands: vec![Operand::new("water"), Operand::new("power")],
            machines: vec![],
            independent_buffers: vec![
                Resource::new("b1", ResourceKind::IndependentBuffer),
                Resource::new("b2", ResourceKind::IndependentBuffer),
                Resource::new("b3", ResourceKind::IndependentBuffer),
                Resource::new("b4", ResourceKind::IndependentBuffer),
            ],
            transporters: vec![
                Resource::new("hw", ResourceKind::Transporter),
                Resource::new("hp", ResourceKind::Transporter),
            ],
            transform: vec![],
            holding: vec![
                ProcessDef::new("hold-water", [0], [0]),
                ProcessDef::new("hold-power", [1], [1]),
            ],
            j_gamma: Some(m(&[&[0, 0, 0, 0, 1, 0], &[0, 0, 0, 0, 0, 1]])),
            // b1->b2 by hw (u = 4*0+1 = 1), b3->b4 by hp (u = 4*2+3 = 11).
            j_h: Some(
                BoolMatrix::from_entries(16, 6, vec![(1, 4), (11, 5)]).unwrap(),
            ),
            ..ModelSpec::default()
        })
        .unwrap();
        let a_s = model.a_s();
        let caps = CapabilitySet::from_concept(&a_s);
        let tensors = IncidenceTensors::build(&model, &a_s, &caps).unwrap();
        let set = LayerSet::build(&model, &a_s, &caps, &tensors, LayerScheme::InputOperandSet)
            .unwrap();
        assert_eq!(set.layers.len(), 2);
        assert_eq!(set.layers[0].bits.as_deref(), Some(&[true, false][..]));
        assert_eq!(set.layers[1].bits.as_deref(), Some(&[false, true][..]));
        // Disjoint and exhaustive members; no cross-layer edges.
        let total: usize = set.layers.iter().map(|l| l.members.len()).sum();
        assert_eq!(total, caps.len());
        for layer in &set.layers {
            assert!(layer.adjacency.is_square());
        }
    }

    #[test]
    fn mixed_operand_process_gets_its_own_layer() {
        // A pump consuming water and power lands in a {water,power} layer.
        let model = SystemModel::new(ModelSpec {
            operands: vec![Operand::new("water"), Operand::new("power")],
            machines: vec![Resource::new("pump", ResourceKind::Machine)],
            independent_buffers: vec![],
            transporters: vec![],
            transform: vec![ProcessDef::new("pressurize", [0, 1], [0])],
            holding: vec![ProcessDef::new("hold-water", [0], [0])],
            j_m: Some(m(&[&[1]])),
            j_gamma: Some(m(&[&[1]])),
            j_h: Some(m(&[&[1]])),
            ..ModelSpec::default()
        })
        .unwrap();
        let a_s = model.a_s();
        let caps = CapabilitySet::from_concept(&a_s);
        let tensors = IncidenceTensors::build(&model, &a_s, &caps).unwrap();
        let set = LayerSet::build(&model, &a_s, &caps, &tensors, LayerScheme::InputOperandSet)
            .unwrap();
        let labels: Vec<&str> = set.layers.iter().map(|l| l.label.as_str()).collect();
        assert!(labels.contains(&"{water}"));
        assert!(labels.contains(&"{water,power}"));
        // The pump capability is not split across layers.
        let pump_psi = caps.psi_of(0, 0).unwrap();
        let owners: Vec<usize> = set
            .layers
            .iter()
            .filter(|l| l.members.contains(&pump_psi))
            .map(|l| l.index)
            .collect();
        assert_eq!(owners.len(), 1);
    }

    #[test]
    fn output_scheme_groups_by_output_sets() {
        // The pump consumes {water, power} but outputs only water, so the
        // output scheme folds it into the water layer while the input
        // scheme separates it.
        let model = SystemModel::new(ModelSpec {
            operands: vec![Operand::new("water"), Operand::new("power")],
            machines: vec![Resource::new("pump", ResourceKind::Machine)],
            independent_buffers: vec![],
            transporters: vec![],
            transform: vec![ProcessDef::new("pressurize", [0, 1], [0])],
            holding: vec![ProcessDef::new("hold-water", [0], [0])],
            j_m: Some(m(&[&[1]])),
            j_gamma: Some(m(&[&[1]])),
            j_h: Some(m(&[&[1]])),
            ..ModelSpec::default()
        })
        .unwrap();
        let a_s = model.a_s();
        let caps = CapabilitySet::from_concept(&a_s);
        let tensors = IncidenceTensors::build(&model, &a_s, &caps).unwrap();
        let by_input =
            LayerSet::build(&model, &a_s, &caps, &tensors, LayerScheme::InputOperandSet).unwrap();
        let by_output =
            LayerSet::build(&model, &a_s, &caps, &tensors, LayerScheme::OutputOperandSet).unwrap();
        assert_eq!(by_input.layers.len(), 2);
        assert_eq!(by_output.layers.len(), 1);
        assert_eq!(by_output.layers[0].label, "{water}");
        assert_eq!(by_output.layers[0].members.len(), caps.len());
    }

    #[test]
    fn custom_scheme_must_cover_capabilities() {
        let (model, a_s, caps, tensors) = toy_artifacts();
        let mut map = BTreeMap::new();
        map.insert((0usize, 0usize), "alpha".to_string());
        let err = LayerSet::build(&model, &a_s, &caps, &tensors, LayerScheme::Custom(map.clone()))
            .unwrap_err();
        assert!(matches!(err, Error::Validation { code, .. } if code == codes::LAYER_PARTITION));

        // Unknown capability rejected.
        map.insert((3usize, 0usize), "beta".to_string());
        let err = LayerSet::build(&model, &a_s, &caps, &tensors, LayerScheme::Custom(map))
            .unwrap_err();
        assert!(matches!(err, Error::Validation { code, .. } if code == codes::LAYER_PARTITION));
    }

    #[test]
    fn custom_scheme_partitions() {
        let (model, a_s, caps, tensors) = toy_artifacts();
        let mut map = BTreeMap::new();
        for psi in 0..caps.len() {
            let (w, v) = caps.pair(psi);
            let label = if w == 0 { "transform" } else { "move" };
            map.insert((w, v), label.to_string());
        }
        let set = LayerSet::build(&model, &a_s, &caps, &tensors, LayerScheme::Custom(map))
            .unwrap();
        assert_eq!(set.layers.len(), 2);
        let total: usize = set.layers.iter().map(|l| l.members.len()).sum();
        assert_eq!(total, caps.len());
        let row_total: usize = set.layers.iter().map(|l| l.projector.n_rows()).sum();
        assert_eq!(row_total, caps.len());
    }
}
