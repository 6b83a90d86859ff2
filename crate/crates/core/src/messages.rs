//! Protocol messages and their wire encoding.
//!
//! All multi-byte fields are big-endian. Reserved fields are written as zero
//! and ignored when decoding.
//!
//! ```text
//! Packet header (4 bytes)
//!   0      2      4
//!   +------+------+
//!   | len  | seq  |        len = 4 + sum of msg_size
//!   +------+------+
//!
//! Message header (12 bytes), followed by msg_size - 12 bytes of body
//!   0    1     2        4            8    9     10       12
//!   +----+-----+--------+------------+----+-----+--------+
//!   |type|vtime|msg_size| originator |ttl |hops | msg_seq|
//!   +----+-----+--------+------------+----+-----+--------+
//!
//! HELLO body (type 1)
//!   0        2     3      4
//!   +--------+-----+------+
//!   |reserved|htime|willin|
//!   +--------+-----+------+
//!   then zero or more link groups:
//!   +----+--------+---------+-----------------+
//!   |code|reserved|group_len| addresses (4 B) |   group_len includes its 4-byte header
//!   +----+--------+---------+-----------------+
//!
//! TC body (type 2)
//!   +------+--------+---------------------------+
//!   | ansn |reserved| advertised addresses (4 B)|
//!   +------+--------+---------------------------+
//!
//! MID body (type 3)
//!   +-------------------------------+
//!   | interface addresses (4 B each)|
//!   +-------------------------------+
//! ```
//!
//! Messages of any other type are carried as opaque bytes so they can still be
//! flooded by the default forwarding rule.

use std::collections::BTreeSet;
use std::fmt;
use std::time::Duration;

use thiserror::Error;

pub const PACKET_HEADER_LEN: usize = 4;
pub const MESSAGE_HEADER_LEN: usize = 12;
pub const HELLO_HEADER_LEN: usize = 4;
pub const LINK_GROUP_HEADER_LEN: usize = 4;
pub const TC_HEADER_LEN: usize = 4;
pub const ADDRESS_LEN: usize = 4;
pub const MAX_PACKET_LEN: usize = u16::MAX as usize;

/// A 32-bit interface or main address. Zero means "unset".
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Address(pub u32);

impl Address {
    pub const UNSET: Address = Address(0);

    pub fn is_unset(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<u32> for Address {
    fn from(v: u32) -> Self {
        Address(v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MessageType {
    Hello,
    Tc,
    Mid,
    Other(u8),
}

impl MessageType {
    pub fn code(self) -> u8 {
        match self {
            MessageType::Hello => 1,
            MessageType::Tc => 2,
            MessageType::Mid => 3,
            MessageType::Other(c) => c,
        }
    }

    pub fn from_code(code: u8) -> Self {
        match code {
            1 => MessageType::Hello,
            2 => MessageType::Tc,
            3 => MessageType::Mid,
            c => MessageType::Other(c),
        }
    }
}

impl fmt::Display for MessageType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MessageType::Hello => f.write_str("HELLO"),
            MessageType::Tc => f.write_str("TC"),
            MessageType::Mid => f.write_str("MID"),
            MessageType::Other(c) => write!(f, "TYPE{c}"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VtimeError {
    #[error("validity time must be positive, got {0} s")]
    NonPositive(f64),
    #[error("validity time {0} s exceeds the largest encodable value ({max} s)", max = Vtime::MAX_SECS)]
    TooLarge(f64),
}

/// An 8-bit validity/interval time: high nibble mantissa `a`, low nibble
/// exponent `b`, value = (1/16 s) * (1 + a/16) * 2^b.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Vtime(pub u8);

impl Vtime {
    const SCALE: f64 = 1.0 / 16.0;
    pub const MAX_SECS: f64 = Self::SCALE * (1.0 + 15.0 / 16.0) * 32768.0;

    pub fn mantissa(self) -> u8 {
        self.0 >> 4
    }

    pub fn exponent(self) -> u8 {
        self.0 & 0x0f
    }

    /// Encode a duration, rounding the mantissa up so the decoded value is
    /// never shorter than requested. Durations below 1/16 s clamp to the
    /// smallest code.
    pub fn from_secs(secs: f64) -> Result<Self, VtimeError> {
        if secs.is_nan() || secs <= 0.0 {
            return Err(VtimeError::NonPositive(secs));
        }
        if secs > Self::MAX_SECS {
            return Err(VtimeError::TooLarge(secs));
        }
        let units = secs / Self::SCALE;
        if units <= 1.0 {
            return Ok(Vtime(0));
        }
        let mut b = units.log2().floor() as i32;
        // log2 can land one off near exact powers of two
        while 2f64.powi(b) > units {
            b -= 1;
        }
        while 2f64.powi(b + 1) <= units {
            b += 1;
        }
        let mut a = (16.0 * (units / 2f64.powi(b) - 1.0)).ceil() as i32;
        if a == 16 {
            b += 1;
            a = 0;
        }
        if b > 15 {
            return Err(VtimeError::TooLarge(secs));
        }
        Ok(Vtime(((a as u8) << 4) | b as u8))
    }

    pub fn from_duration(d: Duration) -> Result<Self, VtimeError> {
        Self::from_secs(d.as_secs_f64())
    }

    pub fn as_secs(self) -> f64 {
        Self::SCALE * (1.0 + self.mantissa() as f64 / 16.0) * 2f64.powi(self.exponent() as i32)
    }

    pub fn as_duration(self) -> Duration {
        Duration::from_secs_f64(self.as_secs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LinkType {
    Unspec = 0,
    Asym = 1,
    Sym = 2,
    Lost = 3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NeighborType {
    NotNeigh = 0,
    SymNeigh = 1,
    MprNeigh = 2,
}

/// Link code byte: bits 0-1 link type, bits 2-3 neighbor type, upper bits zero.
///
/// The raw byte is kept as received so malformed codes survive decoding and
/// can be rejected by HELLO processing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinkCode(pub u8);

impl LinkCode {
    pub fn new(link: LinkType, neighbor: NeighborType) -> Self {
        LinkCode(((neighbor as u8) << 2) | link as u8)
    }

    pub fn link_type(self) -> Option<LinkType> {
        if !self.is_valid() {
            return None;
        }
        Some(match self.0 & 0x03 {
            0 => LinkType::Unspec,
            1 => LinkType::Asym,
            2 => LinkType::Sym,
            _ => LinkType::Lost,
        })
    }

    pub fn neighbor_type(self) -> Option<NeighborType> {
        if !self.is_valid() {
            return None;
        }
        Some(match (self.0 >> 2) & 0x03 {
            0 => NeighborType::NotNeigh,
            1 => NeighborType::SymNeigh,
            _ => NeighborType::MprNeigh,
        })
    }

    /// Upper nibble clear, neighbor type in range, and no SYM link paired with NOT_NEIGH.
    pub fn is_valid(self) -> bool {
        let link = self.0 & 0x03;
        let neigh = (self.0 >> 2) & 0x03;
        self.0 <= 0x0f && neigh <= 2 && !(link == LinkType::Sym as u8 && neigh == 0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkGroup {
    pub code: LinkCode,
    pub addresses: Vec<Address>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HelloMessage {
    pub htime: Vtime,
    pub willingness: u8,
    pub link_groups: Vec<LinkGroup>,
}

impl HelloMessage {
    /// Iterate over every (link code, address) pair in the message.
    pub fn entries(&self) -> impl Iterator<Item = (LinkCode, Address)> + '_ {
        self.link_groups.iter().flat_map(|g| g.addresses.iter().map(move |a| (g.code, *a)))
    }

    fn body_len(&self) -> usize {
        HELLO_HEADER_LEN
            + self.link_groups.iter().map(|g| LINK_GROUP_HEADER_LEN + ADDRESS_LEN * g.addresses.len()).sum::<usize>()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TcMessage {
    pub ansn: u16,
    pub advertised: Vec<Address>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MidMessage {
    pub interface_addresses: Vec<Address>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MessageBody {
    Hello(HelloMessage),
    Tc(TcMessage),
    Mid(MidMessage),
    /// Body of a message type this implementation does not interpret.
    Opaque(Vec<u8>),
}

impl MessageBody {
    pub fn encoded_len(&self) -> usize {
        match self {
            MessageBody::Hello(h) => h.body_len(),
            MessageBody::Tc(t) => TC_HEADER_LEN + ADDRESS_LEN * t.advertised.len(),
            MessageBody::Mid(m) => ADDRESS_LEN * m.interface_addresses.len(),
            MessageBody::Opaque(b) => b.len(),
        }
    }

    fn type_matches(&self, t: MessageType) -> bool {
        matches!(
            (self, t),
            (MessageBody::Hello(_), MessageType::Hello)
                | (MessageBody::Tc(_), MessageType::Tc)
                | (MessageBody::Mid(_), MessageType::Mid)
                | (MessageBody::Opaque(_), MessageType::Other(_))
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MessageHeader {
    pub msg_type: MessageType,
    pub vtime: Vtime,
    pub msg_size: u16,
    pub originator: Address,
    pub ttl: u8,
    pub hop_count: u8,
    pub msg_seq_num: u16,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Message {
    pub header: MessageHeader,
    pub body: MessageBody,
}

impl Message {
    /// Build a message whose header type and size agree with `body`.
    pub fn new(body: MessageBody, vtime: Vtime, originator: Address, ttl: u8, msg_seq_num: u16) -> Self {
        let msg_type = match &body {
            MessageBody::Hello(_) => MessageType::Hello,
            MessageBody::Tc(_) => MessageType::Tc,
            MessageBody::Mid(_) => MessageType::Mid,
            MessageBody::Opaque(_) => MessageType::Other(0),
        };
        Self::with_type(msg_type, body, vtime, originator, ttl, msg_seq_num)
    }

    pub fn with_type(
        msg_type: MessageType,
        body: MessageBody,
        vtime: Vtime,
        originator: Address,
        ttl: u8,
        msg_seq_num: u16,
    ) -> Self {
        let size = MESSAGE_HEADER_LEN + body.encoded_len();
        Message {
            header: MessageHeader {
                msg_type,
                vtime,
                msg_size: size.min(u16::MAX as usize) as u16,
                originator,
                ttl,
                hop_count: 0,
                msg_seq_num,
            },
            body,
        }
    }

    pub fn encoded_len(&self) -> usize {
        MESSAGE_HEADER_LEN + self.body.encoded_len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PacketHeader {
    pub packet_length: u16,
    pub packet_seq_num: u16,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Packet {
    pub header: PacketHeader,
    pub messages: Vec<Message>,
}

impl Packet {
    /// Build a packet whose declared length matches its messages.
    pub fn new(packet_seq_num: u16, messages: Vec<Message>) -> Self {
        let len = PACKET_HEADER_LEN + messages.iter().map(Message::encoded_len).sum::<usize>();
        Packet { header: PacketHeader { packet_length: len.min(u16::MAX as usize) as u16, packet_seq_num }, messages }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EncodeError {
    #[error("packet of {0} bytes exceeds the 65535-byte limit")]
    PacketTooLarge(usize),
    #[error("packet header declares {declared} bytes but contents need {actual}")]
    PacketLengthMismatch { declared: u16, actual: usize },
    #[error("message {index} declares {declared} bytes but encodes to {actual}")]
    MessageSizeMismatch { index: usize, declared: u16, actual: usize },
    #[error("message {index} header type {header} does not match its body")]
    MessageTypeMismatch { index: usize, header: MessageType },
    #[error("address {0} appears in more than one HELLO link group")]
    DuplicateHelloAddress(Address),
    #[error("willingness {0} is outside 0..=7")]
    InvalidWillingness(u8),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecodeErrorKind {
    TruncatedHeader,
    LengthExceedsBuffer { declared: usize, available: usize },
    PacketLengthMismatch { declared: usize, actual: usize },
    ZeroLengthMessage,
    MessageTooShort(usize),
    MisalignedBody(usize),
    InvalidWillingness(u8),
}

impl fmt::Display for DecodeErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecodeErrorKind::TruncatedHeader => f.write_str("truncated header"),
            DecodeErrorKind::LengthExceedsBuffer { declared, available } => {
                write!(f, "length field {declared} exceeds the {available} bytes available")
            }
            DecodeErrorKind::PacketLengthMismatch { declared, actual } => {
                write!(f, "packet declares {declared} bytes but buffer holds {actual}")
            }
            DecodeErrorKind::ZeroLengthMessage => f.write_str("zero-length message"),
            DecodeErrorKind::MessageTooShort(n) => write!(f, "message size {n} is below the header size"),
            DecodeErrorKind::MisalignedBody(n) => write!(f, "body of {n} bytes is not a whole number of addresses"),
            DecodeErrorKind::InvalidWillingness(w) => write!(f, "willingness {w} is outside 0..=7"),
        }
    }
}

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
#[error("{kind} at byte {offset}")]
pub struct DecodeError {
    pub offset: usize,
    pub kind: DecodeErrorKind,
}

fn put_addr(out: &mut Vec<u8>, a: Address) {
    out.extend_from_slice(&a.0.to_be_bytes());
}

fn encode_body(out: &mut Vec<u8>, body: &MessageBody) -> Result<(), EncodeError> {
    match body {
        MessageBody::Hello(h) => {
            if h.willingness > 7 {
                return Err(EncodeError::InvalidWillingness(h.willingness));
            }
            let mut seen = BTreeSet::new();
            out.extend_from_slice(&[0, 0, h.htime.0, h.willingness]);
            for g in &h.link_groups {
                let len = LINK_GROUP_HEADER_LEN + ADDRESS_LEN * g.addresses.len();
                out.push(g.code.0);
                out.push(0);
                out.extend_from_slice(&(len as u16).to_be_bytes());
                for &a in &g.addresses {
                    if !seen.insert(a) {
                        return Err(EncodeError::DuplicateHelloAddress(a));
                    }
                    put_addr(out, a);
                }
            }
        }
        MessageBody::Tc(t) => {
            out.extend_from_slice(&t.ansn.to_be_bytes());
            out.extend_from_slice(&[0, 0]);
            t.advertised.iter().for_each(|&a| put_addr(out, a));
        }
        MessageBody::Mid(m) => m.interface_addresses.iter().for_each(|&a| put_addr(out, a)),
        MessageBody::Opaque(b) => out.extend_from_slice(b),
    }
    Ok(())
}

/// Append one message (header and body) to `out`, checking header consistency.
pub fn encode_message(out: &mut Vec<u8>, index: usize, msg: &Message) -> Result<(), EncodeError> {
    let h = &msg.header;
    if !msg.body.type_matches(h.msg_type) {
        return Err(EncodeError::MessageTypeMismatch { index, header: h.msg_type });
    }
    let actual = msg.encoded_len();
    if actual != h.msg_size as usize {
        return Err(EncodeError::MessageSizeMismatch { index, declared: h.msg_size, actual });
    }
    out.push(h.msg_type.code());
    out.push(h.vtime.0);
    out.extend_from_slice(&h.msg_size.to_be_bytes());
    put_addr(out, h.originator);
    out.push(h.ttl);
    out.push(h.hop_count);
    out.extend_from_slice(&h.msg_seq_num.to_be_bytes());
    encode_body(out, &msg.body)
}

pub fn encode_packet(packet: &Packet) -> Result<Vec<u8>, EncodeError> {
    let actual = PACKET_HEADER_LEN + packet.messages.iter().map(Message::encoded_len).sum::<usize>();
    if actual > MAX_PACKET_LEN {
        return Err(EncodeError::PacketTooLarge(actual));
    }
    if actual != packet.header.packet_length as usize {
        return Err(EncodeError::PacketLengthMismatch { declared: packet.header.packet_length, actual });
    }
    let mut out = Vec::with_capacity(actual);
    out.extend_from_slice(&packet.header.packet_length.to_be_bytes());
    out.extend_from_slice(&packet.header.packet_seq_num.to_be_bytes());
    for (i, m) in packet.messages.iter().enumerate() {
        encode_message(&mut out, i, m)?;
    }
    Ok(out)
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn err(&self, kind: DecodeErrorKind) -> DecodeError {
        DecodeError { offset: self.pos, kind }
    }

    fn take(&mut self, n: usize) -> Result<&'a [u8], DecodeError> {
        if self.buf.len() - self.pos < n {
            return Err(self.err(DecodeErrorKind::TruncatedHeader));
        }
        let s = &self.buf[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn u8(&mut self) -> Result<u8, DecodeError> {
        Ok(self.take(1)?[0])
    }

    fn u16(&mut self) -> Result<u16, DecodeError> {
        let s = self.take(2)?;
        Ok(u16::from_be_bytes([s[0], s[1]]))
    }

    fn addr(&mut self) -> Result<Address, DecodeError> {
        let s = self.take(4)?;
        Ok(Address(u32::from_be_bytes([s[0], s[1], s[2], s[3]])))
    }

    fn addrs(&mut self, bytes: usize) -> Result<Vec<Address>, DecodeError> {
        if !bytes.is_multiple_of(ADDRESS_LEN) {
            return Err(self.err(DecodeErrorKind::MisalignedBody(bytes)));
        }
        (0..bytes / ADDRESS_LEN).map(|_| self.addr()).collect()
    }
}

fn decode_hello(r: &mut Reader<'_>, end: usize) -> Result<HelloMessage, DecodeError> {
    if end - r.pos < HELLO_HEADER_LEN {
        return Err(r.err(DecodeErrorKind::TruncatedHeader));
    }
    r.take(2)?;
    let htime = Vtime(r.u8()?);
    let willingness = r.u8()?;
    if willingness > 7 {
        return Err(DecodeError { offset: r.pos - 1, kind: DecodeErrorKind::InvalidWillingness(willingness) });
    }
    let mut link_groups = Vec::new();
    while r.pos < end {
        let start = r.pos;
        if end - start < LINK_GROUP_HEADER_LEN {
            return Err(r.err(DecodeErrorKind::TruncatedHeader));
        }
        let code = LinkCode(r.u8()?);
        r.u8()?;
        let len = r.u16()? as usize;
        if len < LINK_GROUP_HEADER_LEN {
            return Err(DecodeError { offset: start, kind: DecodeErrorKind::MessageTooShort(len) });
        }
        if len > end - start {
            return Err(DecodeError {
                offset: start + 2,
                kind: DecodeErrorKind::LengthExceedsBuffer { declared: len, available: end - start },
            });
        }
        let addresses = r.addrs(len - LINK_GROUP_HEADER_LEN)?;
        link_groups.push(LinkGroup { code, addresses });
    }
    Ok(HelloMessage { htime, willingness, link_groups })
}

fn decode_message(r: &mut Reader<'_>) -> Result<Message, DecodeError> {
    let start = r.pos;
    let remaining = r.buf.len() - start;
    if remaining < MESSAGE_HEADER_LEN {
        return Err(r.err(DecodeErrorKind::TruncatedHeader));
    }
    let msg_type = MessageType::from_code(r.u8()?);
    let vtime = Vtime(r.u8()?);
    let msg_size = r.u16()?;
    let size = msg_size as usize;
    if size == 0 {
        return Err(DecodeError { offset: start + 2, kind: DecodeErrorKind::ZeroLengthMessage });
    }
    if size < MESSAGE_HEADER_LEN {
        return Err(DecodeError { offset: start + 2, kind: DecodeErrorKind::MessageTooShort(size) });
    }
    if size > remaining {
        return Err(DecodeError {
            offset: start + 2,
            kind: DecodeErrorKind::LengthExceedsBuffer { declared: size, available: remaining },
        });
    }
    let originator = r.addr()?;
    let ttl = r.u8()?;
    let hop_count = r.u8()?;
    let msg_seq_num = r.u16()?;
    let end = start + size;
    let body_len = size - MESSAGE_HEADER_LEN;
    let body = match msg_type {
        MessageType::Hello => MessageBody::Hello(decode_hello(r, end)?),
        MessageType::Tc => {
            if body_len < TC_HEADER_LEN {
                return Err(r.err(DecodeErrorKind::TruncatedHeader));
            }
            let ansn = r.u16()?;
            r.take(2)?;
            MessageBody::Tc(TcMessage { ansn, advertised: r.addrs(body_len - TC_HEADER_LEN)? })
        }
        MessageType::Mid => MessageBody::Mid(MidMessage { interface_addresses: r.addrs(body_len)? }),
        MessageType::Other(_) => MessageBody::Opaque(r.take(body_len)?.to_vec()),
    };
    debug_assert_eq!(r.pos, end);
    Ok(Message { header: MessageHeader { msg_type, vtime, msg_size, originator, ttl, hop_count, msg_seq_num }, body })
}

/// Decode a single message occupying the whole of `bytes`.
pub fn decode_message_bytes(bytes: &[u8]) -> Result<Message, DecodeError> {
    let mut r = Reader { buf: bytes, pos: 0 };
    let m = decode_message(&mut r)?;
    if r.pos != bytes.len() {
        return Err(r.err(DecodeErrorKind::PacketLengthMismatch { declared: r.pos, actual: bytes.len() }));
    }
    Ok(m)
}

pub fn decode_packet(bytes: &[u8]) -> Result<Packet, DecodeError> {
    let mut r = Reader { buf: bytes, pos: 0 };
    if bytes.len() < PACKET_HEADER_LEN {
        return Err(r.err(DecodeErrorKind::TruncatedHeader));
    }
    let packet_length = r.u16()?;
    let packet_seq_num = r.u16()?;
    let declared = packet_length as usize;
    if declared > bytes.len() {
        return Err(DecodeError {
            offset: 0,
            kind: DecodeErrorKind::LengthExceedsBuffer { declared, available: bytes.len() },
        });
    }
    if declared != bytes.len() {
        return Err(DecodeError {
            offset: 0,
            kind: DecodeErrorKind::PacketLengthMismatch { declared, actual: bytes.len() },
        });
    }
    if declared < PACKET_HEADER_LEN {
        return Err(DecodeError { offset: 0, kind: DecodeErrorKind::MessageTooShort(declared) });
    }
    let mut messages = Vec::new();
    while r.pos < bytes.len() {
        messages.push(decode_message(&mut r)?);
    }
    Ok(Packet { header: PacketHeader { packet_length, packet_seq_num }, messages })
}

#[cfg(test)]
mod tests {
    use super::*;

    // Offsets from the field-width table in the module docs:
    // [0..4] packet header, [4..16] message header, [16..20] ansn + reserved,
    // [20..28] two advertised addresses.
    const GOLDEN_TC: [u8; 28] = [
        0x00, 0x1c, 0x00, 0x01, // packet_length = 28, packet_seq = 1
        0x02, 0x84, 0x00, 0x18, // type TC, vtime 1.5 s (a=8, b=4), msg_size = 24
        0x0a, 0x00, 0x00, 0x01, // originator
        0xff, 0x00, 0x00, 0x07, // ttl 255, hop_count 0, msg_seq 7
        0x00, 0x05, 0x00, 0x00, // ansn 5, reserved
        0x0a, 0x00, 0x00, 0x02, //
        0x0a, 0x00, 0x00, 0x03, //
    ];

    fn golden_tc_packet() -> Packet {
        let tc = TcMessage { ansn: 5, advertised: vec![Address(0x0a00_0002), Address(0x0a00_0003)] };
        let msg = Message::new(MessageBody::Tc(tc), Vtime::from_secs(1.5).unwrap(), Address(0x0a00_0001), 255, 7);
        Packet::new(1, vec![msg])
    }

    #[test]
    fn empty_envelope_is_four_bytes() {
        let p = Packet::new(0x1234, vec![]);
        assert_eq!(encode_packet(&p).unwrap(), vec![0x00, 0x04, 0x12, 0x34]);
    }

    #[test]
    fn tc_with_two_addresses_matches_golden_bytes() {
        let p = golden_tc_packet();
        assert_eq!(p.messages[0].header.msg_size as usize, 12 + MESSAGE_HEADER_LEN);
        assert_eq!(encode_packet(&p).unwrap(), GOLDEN_TC.to_vec());
        assert_eq!(decode_packet(&GOLDEN_TC).unwrap(), p);
    }

    #[test]
    fn hello_layout() {
        let hello = HelloMessage {
            htime: Vtime::from_secs(0.5).unwrap(),
            willingness: 3,
            link_groups: vec![LinkGroup {
                code: LinkCode::new(LinkType::Sym, NeighborType::MprNeigh),
                addresses: vec![Address(9)],
            }],
        };
        let p = Packet::new(2, vec![Message::new(MessageBody::Hello(hello), Vtime(0x84), Address(1), 1, 3)]);
        let bytes = encode_packet(&p).unwrap();
        assert_eq!(
            bytes,
            vec![
                0x00, 0x1c, 0x00, 0x02, 0x01, 0x84, 0x00, 0x18, 0, 0, 0, 1, 1, 0, 0, 3, // headers
                0, 0, 0x03, 3, // reserved, htime 0.5 s, willingness
                0x0a, 0, 0x00, 0x08, 0, 0, 0, 9, // code (MPR_NEIGH<<2 | SYM), group_len 8
            ]
        );
        assert_eq!(decode_packet(&bytes).unwrap(), p);
    }

    #[test]
    fn decode_errors_report_offsets() {
        let e = decode_packet(&[0, 4, 0]).unwrap_err();
        assert_eq!(e.kind, DecodeErrorKind::TruncatedHeader);
        assert_eq!(e.offset, 0);
        assert_eq!(e.to_string(), "truncated header at byte 0");

        let mut buf = vec![0u8; 50];
        buf[1] = 100;
        let e = decode_packet(&buf).unwrap_err();
        assert!(matches!(e.kind, DecodeErrorKind::LengthExceedsBuffer { declared: 100, available: 50 }));

        // zero msg_size
        let buf = [0, 16, 0, 0, 2, 0, 0, 0, 0, 0, 0, 1, 1, 0, 0, 0];
        let e = decode_packet(&buf).unwrap_err();
        assert_eq!(e.kind, DecodeErrorKind::ZeroLengthMessage);
        assert_eq!(e.offset, 6);

        // message claims more than the packet holds
        let mut buf = GOLDEN_TC.to_vec();
        buf[7] = 0x30;
        let e = decode_packet(&buf).unwrap_err();
        assert_eq!(e.offset, 6);
        assert!(matches!(e.kind, DecodeErrorKind::LengthExceedsBuffer { declared: 48, .. }));

        // address list not a multiple of four
        let mut buf = GOLDEN_TC.to_vec();
        buf.pop();
        buf[1] = 27;
        buf[7] = 23;
        assert!(matches!(decode_packet(&buf).unwrap_err().kind, DecodeErrorKind::MisalignedBody(7)));
    }

    #[test]
    fn unknown_types_decode_as_opaque() {
        let m = Message::with_type(
            MessageType::Other(200),
            MessageBody::Opaque(vec![1, 2, 3, 4, 5]),
            Vtime(0),
            Address(5),
            9,
            1,
        );
        let p = Packet::new(0, vec![m]);
        let bytes = encode_packet(&p).unwrap();
        let d = decode_packet(&bytes).unwrap();
        assert_eq!(d.messages[0].header.msg_type, MessageType::Other(200));
        assert_eq!(d, p);
    }

    #[test]
    fn encode_rejects_inconsistent_input() {
        let mut p = golden_tc_packet();
        p.header.packet_length = 30;
        assert!(matches!(encode_packet(&p), Err(EncodeError::PacketLengthMismatch { .. })));

        let mut p = golden_tc_packet();
        p.messages[0].header.msg_size = 20;
        assert!(matches!(encode_packet(&p), Err(EncodeError::MessageSizeMismatch { index: 0, .. })));

        let mut p = golden_tc_packet();
        p.messages[0].header.msg_type = MessageType::Mid;
        assert!(matches!(encode_packet(&p), Err(EncodeError::MessageTypeMismatch { .. })));

        let hello = HelloMessage {
            htime: Vtime(0),
            willingness: 3,
            link_groups: vec![
                LinkGroup { code: LinkCode::new(LinkType::Asym, NeighborType::NotNeigh), addresses: vec![Address(4)] },
                LinkGroup { code: LinkCode::new(LinkType::Sym, NeighborType::SymNeigh), addresses: vec![Address(4)] },
            ],
        };
        let p = Packet::new(0, vec![Message::new(MessageBody::Hello(hello), Vtime(0), Address(1), 1, 0)]);
        assert_eq!(encode_packet(&p), Err(EncodeError::DuplicateHelloAddress(Address(4))));

        let big = TcMessage { ansn: 0, advertised: vec![Address(1); 16_400] };
        let p = Packet::new(0, vec![Message::new(MessageBody::Tc(big), Vtime(0), Address(1), 1, 0)]);
        assert!(matches!(encode_packet(&p), Err(EncodeError::PacketTooLarge(_))));
    }

    #[test]
    fn link_code_validity() {
        assert!(LinkCode::new(LinkType::Asym, NeighborType::NotNeigh).is_valid());
        assert!(!LinkCode::new(LinkType::Sym, NeighborType::NotNeigh).is_valid());
        assert!(!LinkCode(0x0c).is_valid());
        assert!(!LinkCode(0x12).is_valid());
        assert_eq!(LinkCode(0x06).link_type(), Some(LinkType::Sym));
        assert_eq!(LinkCode(0x06).neighbor_type(), Some(NeighborType::SymNeigh));
    }

    #[test]
    fn vtime_two_seconds_within_precision() {
        let d = Vtime::from_secs(2.0).unwrap().as_secs();
        assert!((2.0 * 15.0 / 16.0..=2.0 * 16.0 / 15.0).contains(&d));
        assert_eq!(Vtime::from_secs(0.5).unwrap(), Vtime(0x03));
        assert_eq!(Vtime::from_secs(1.5).unwrap(), Vtime(0x84));
    }

    #[test]
    fn vtime_rejects_out_of_range() {
        assert!(matches!(Vtime::from_secs(0.0), Err(VtimeError::NonPositive(_))));
        assert!(matches!(Vtime::from_secs(-1.0), Err(VtimeError::NonPositive(_))));
        assert!(matches!(Vtime::from_secs(4000.0), Err(VtimeError::TooLarge(_))));
        assert_eq!(Vtime::from_secs(Vtime::MAX_SECS).unwrap(), Vtime(0xff));
        assert_eq!(Vtime::from_secs(0.01).unwrap(), Vtime(0));
    }

    #[test]
    fn vtime_table_is_monotone() {
        let mut codes: Vec<u8> = (0..=255).collect();
        codes.sort_by_key(|&c| (c & 0x0f, c >> 4));
        let values: Vec<f64> = codes.iter().map(|&c| Vtime(c).as_secs()).collect();
        assert!(values.windows(2).all(|w| w[0] <= w[1]));
        // every code is a fixed point of encode
        for c in 0..=255u8 {
            assert_eq!(Vtime::from_secs(Vtime(c).as_secs()).unwrap(), Vtime(c));
        }
    }
}
