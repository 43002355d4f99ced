//! Octet layout of the `Color` message. All multi-octet integers are
//! big-endian.
//!
//! ```text
//! offset  width  field
//! 0       1      type (0x01)
//! 1       2      originator address
//! 3       1      color, 0xFF = uncolored
//! 4       2      prio
//! 6       1      size_max2_prio1 = n1, 0..=2
//! 7       4*n1   max2_prio1 entries: prio (2) then address (2)
//! ..      1      size_max2_prio2 = n2, 0..=2
//! ..      4*n2   max2_prio2 entries, same layout
//! ..      1      size_bitmap1 = b1 octets
//! ..      b1     color_bitmap1, color i = bit (i % 8) of octet (i / 8)
//! ..      1      size_bitmap2 = b2 octets
//! ..      b2     color_bitmap2, same layout
//! ```
//!
//! Bitmaps carry no trailing zero octet, so every message has exactly one
//! encoding.

use thiserror::Error;

use super::bitmap::ColorSet;
use super::Priority;
use crate::graph::NodeId;
use crate::validity::Color;

pub const MSG_TYPE_COLOR: u8 = 0x01;
pub const UNCOLORED: u8 = 0xFF;
/// Largest color representable on the wire.
pub const MAX_WIRE_COLOR: Color = 254;
const MAX_LIST: usize = 2;
const MAX_BITMAP_OCTETS: usize = (MAX_WIRE_COLOR as usize) / 8 + 1;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodecError {
    #[error("message truncated while reading {field}")]
    Truncated { field: &'static str },

    #[error("{field} = {size} is out of range")]
    SizeOutOfRange { field: &'static str, size: usize },

    #[error("{field} has a trailing zero octet")]
    NonCanonicalBitmap { field: &'static str },

    #[error("unknown message type {0:#04x}")]
    UnknownType(u8),

    #[error("{0} unexpected octets after the message")]
    TrailingBytes(usize),

    #[error("{field} value {value} does not fit its wire width")]
    FieldOverflow { field: &'static str, value: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ColorMessage {
    pub originator: NodeId,
    pub color: Option<Color>,
    pub prio: u32,
    pub max2_prio1: Vec<Priority>,
    pub max2_prio2: Vec<Priority>,
    pub bitmap1: ColorSet,
    pub bitmap2: ColorSet,
}

impl ColorMessage {
    pub fn priority(&self) -> Priority {
        Priority::new(self.prio, self.originator)
    }

    pub fn encode(&self) -> Result<Vec<u8>, CodecError> {
        let mut out = Vec::with_capacity(16);
        out.push(MSG_TYPE_COLOR);
        put_u16(&mut out, "originator", self.originator.0)?;
        match self.color {
            None => out.push(UNCOLORED),
            Some(c) if c <= MAX_WIRE_COLOR => out.push(c as u8),
            Some(c) => return Err(CodecError::FieldOverflow { field: "color", value: c.into() }),
        }
        put_u16(&mut out, "prio", self.prio)?;
        put_list(&mut out, "size_max2_prio1", &self.max2_prio1)?;
        put_list(&mut out, "size_max2_prio2", &self.max2_prio2)?;
        put_bitmap(&mut out, "size_bitmap1", &self.bitmap1)?;
        put_bitmap(&mut out, "size_bitmap2", &self.bitmap2)?;
        Ok(out)
    }

    pub fn decode(bytes: &[u8]) -> Result<Self, CodecError> {
        let mut r = Reader { bytes, pos: 0 };
        let ty = r.u8("type")?;
        if ty != MSG_TYPE_COLOR {
            return Err(CodecError::UnknownType(ty));
        }
        let originator = NodeId(r.u16("originator")?.into());
        let color = match r.u8("color")? {
            UNCOLORED => None,
            c => Some(c.into()),
        };
        let prio = r.u16("prio")?.into();
        let max2_prio1 = r.list("size_max2_prio1", "max2_prio1")?;
        let max2_prio2 = r.list("size_max2_prio2", "max2_prio2")?;
        let bitmap1 = r.bitmap("size_bitmap1", "color_bitmap1")?;
        let bitmap2 = r.bitmap("size_bitmap2", "color_bitmap2")?;
        if r.pos != bytes.len() {
            return Err(CodecError::TrailingBytes(bytes.len() - r.pos));
        }
        Ok(ColorMessage { originator, color, prio, max2_prio1, max2_prio2, bitmap1, bitmap2 })
    }
}

fn put_u16(out: &mut Vec<u8>, field: &'static str, v: u32) -> Result<(), CodecError> {
    let v = u16::try_from(v).map_err(|_| CodecError::FieldOverflow { field, value: v.into() })?;
    out.extend_from_slice(&v.to_be_bytes());
    Ok(())
}

fn put_list(out: &mut Vec<u8>, field: &'static str, list: &[Priority]) -> Result<(), CodecError> {
    if list.len() > MAX_LIST {
        return Err(CodecError::SizeOutOfRange { field, size: list.len() });
    }
    out.push(list.len() as u8);
    for p in list {
        put_u16(out, "prio", p.prio)?;
        put_u16(out, "address", p.address.0)?;
    }
    Ok(())
}

fn put_bitmap(out: &mut Vec<u8>, field: &'static str, set: &ColorSet) -> Result<(), CodecError> {
    let octets = set.as_octets();
    if octets.len() > MAX_BITMAP_OCTETS {
        return Err(CodecError::SizeOutOfRange { field, size: octets.len() });
    }
    out.push(octets.len() as u8);
    out.extend_from_slice(octets);
    Ok(())
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Reader<'_> {
    fn take(&mut self, n: usize, field: &'static str) -> Result<&[u8], CodecError> {
        let end = self.pos + n;
        let s = self.bytes.get(self.pos..end).ok_or(CodecError::Truncated { field })?;
        self.pos = end;
        Ok(s)
    }

    fn u8(&mut self, field: &'static str) -> Result<u8, CodecError> {
        Ok(self.take(1, field)?[0])
    }

    fn u16(&mut self, field: &'static str) -> Result<u16, CodecError> {
        let s = self.take(2, field)?;
        Ok(u16::from_be_bytes([s[0], s[1]]))
    }

    fn list(&mut self, size_field: &'static str, field: &'static str) -> Result<Vec<Priority>, CodecError> {
        let n = self.u8(size_field)? as usize;
        if n > MAX_LIST {
            return Err(CodecError::SizeOutOfRange { field: size_field, size: n });
        }
        (0..n)
            .map(|_| {
                let prio = self.u16(field)?;
                let addr = self.u16(field)?;
                Ok(Priority::new(prio.into(), NodeId(addr.into())))
            })
            .collect()
    }

    fn bitmap(&mut self, size_field: &'static str, field: &'static str) -> Result<ColorSet, CodecError> {
        let n = self.u8(size_field)? as usize;
        if n > MAX_BITMAP_OCTETS {
            return Err(CodecError::SizeOutOfRange { field: size_field, size: n });
        }
        let octets = self.take(n, field)?;
        ColorSet::from_octets(octets).ok_or(CodecError::NonCanonicalBitmap { field })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(prio: u32, addr: u32) -> Priority {
        Priority::new(prio, NodeId(addr))
    }

    fn sample() -> ColorMessage {
        ColorMessage {
            originator: NodeId(0x0102),
            color: Some(3),
            prio: 16,
            max2_prio1: vec![p(16, 7), p(12, 9)],
            max2_prio2: vec![],
            bitmap1: [0, 2].into_iter().collect(),
            bitmap2: [9].into_iter().collect(),
        }
    }

    #[test]
    fn layout_is_pinned() {
        let bytes = sample().encode().unwrap();
        assert_eq!(
            bytes,
            vec![
                0x01,
                0x01,
                0x02,
                0x03,
                0x00,
                0x10, //
                0x02,
                0x00,
                0x10,
                0x00,
                0x07,
                0x00,
                0x0C,
                0x00,
                0x09, //
                0x00, //
                0x01,
                0b0000_0101, //
                0x02,
                0x00,
                0x02,
            ]
        );
    }

    #[test]
    fn empty_list_has_no_payload() {
        let m = ColorMessage {
            color: None,
            max2_prio1: vec![],
            bitmap1: ColorSet::new(),
            bitmap2: ColorSet::new(),
            ..sample()
        };
        let bytes = m.encode().unwrap();
        assert_eq!(bytes, vec![0x01, 0x01, 0x02, 0xFF, 0x00, 0x10, 0, 0, 0, 0]);
        assert_eq!(ColorMessage::decode(&bytes).unwrap(), m);
    }

    #[test]
    fn decode_errors_name_the_field() {
        let bytes = sample().encode().unwrap();
        assert_eq!(ColorMessage::decode(&bytes[..9]), Err(CodecError::Truncated { field: "max2_prio1" }));
        assert_eq!(ColorMessage::decode(&bytes[..3]), Err(CodecError::Truncated { field: "color" }));
        let mut bad = bytes.clone();
        bad[6] = 3;
        assert_eq!(ColorMessage::decode(&bad), Err(CodecError::SizeOutOfRange { field: "size_max2_prio1", size: 3 }));
        let mut bad = bytes.clone();
        bad[0] = 0x02;
        assert_eq!(ColorMessage::decode(&bad), Err(CodecError::UnknownType(2)));
        let mut long = bytes.clone();
        long.push(0);
        assert_eq!(ColorMessage::decode(&long), Err(CodecError::TrailingBytes(1)));
        let zero_tail = [0x01, 0, 0, 0xFF, 0, 0, 0, 0, 1, 0, 0];
        assert_eq!(ColorMessage::decode(&zero_tail), Err(CodecError::NonCanonicalBitmap { field: "color_bitmap1" }));
    }

    #[test]
    fn encode_rejects_wide_fields() {
        let m = ColorMessage { prio: 70_000, ..sample() };
        assert_eq!(m.encode(), Err(CodecError::FieldOverflow { field: "prio", value: 70_000 }));
        let m = ColorMessage { color: Some(255), ..sample() };
        assert!(matches!(m.encode(), Err(CodecError::FieldOverflow { field: "color", .. })));
        let m = ColorMessage { max2_prio2: vec![p(1, 1); 3], ..sample() };
        assert!(matches!(m.encode(), Err(CodecError::SizeOutOfRange { .. })));
    }

    fn arb_priority() -> impl Strategy<Value = Priority> {
        (any::<u16>(), any::<u16>()).prop_map(|(a, b)| p(a.into(), b.into()))
    }

    fn arb_set() -> impl Strategy<Value = ColorSet> {
        proptest::collection::vec(0..=MAX_WIRE_COLOR, 0..12).prop_map(|v| v.into_iter().collect())
    }

    prop_compose! {
        fn arb_message()(
            originator in any::<u16>(),
            color in proptest::option::of(0..=MAX_WIRE_COLOR),
            prio in any::<u16>(),
            l1 in proptest::collection::vec(arb_priority(), 0..=2),
            l2 in proptest::collection::vec(arb_priority(), 0..=2),
            bitmap1 in arb_set(),
            bitmap2 in arb_set(),
        ) -> ColorMessage {
            ColorMessage {
                originator: NodeId(originator.into()),
                color,
                prio: prio.into(),
                max2_prio1: l1,
                max2_prio2: l2,
                bitmap1,
                bitmap2,
            }
        }
    }

    proptest! {
        #[test]
        fn round_trip(m in arb_message()) {
            let bytes = m.encode().unwrap();
            prop_assert_eq!(ColorMessage::decode(&bytes).unwrap(), m);
        }

        #[test]
        fn decode_never_panics(bytes in proptest::collection::vec(any::<u8>(), 0..64)) {
            if let Ok(m) = ColorMessage::decode(&bytes) {
                prop_assert_eq!(m.encode().unwrap(), bytes);
            }
        }
    }
}
