//! Encode a HELLO and a TC into one packet, dump the bytes, decode them back.

use dream_olsr::messages::{
    decode_packet, encode_packet, Address, HelloMessage, LinkCode, LinkGroup, LinkType, Message, MessageBody,
    NeighborType, Packet, TcMessage, Vtime,
};

fn main() {
    let hold = Vtime::from_secs(1.5).expect("1.5 s is encodable");
    let hello = HelloMessage {
        htime: Vtime::from_secs(0.5).unwrap(),
        willingness: 3,
        link_groups: vec![
            LinkGroup {
                code: LinkCode::new(LinkType::Sym, NeighborType::MprNeigh),
                addresses: vec![Address(0x0a00_0002)],
            },
            LinkGroup {
                code: LinkCode::new(LinkType::Asym, NeighborType::NotNeigh),
                addresses: vec![Address(0x0a00_0003), Address(0x0a00_0004)],
            },
        ],
    };
    let tc = TcMessage { ansn: 42, advertised: vec![Address(0x0a00_0002)] };
    let packet = Packet::new(
        1,
        vec![
            Message::new(MessageBody::Hello(hello), hold, Address(0x0a00_0001), 1, 10),
            Message::new(MessageBody::Tc(tc), hold, Address(0x0a00_0001), 255, 11),
        ],
    );

    let bytes = encode_packet(&packet).expect("packet encodes");
    println!("{} bytes:", bytes.len());
    for chunk in bytes.chunks(16) {
        let hex: Vec<String> = chunk.iter().map(|b| format!("{b:02x}")).collect();
        println!("  {}", hex.join(" "));
    }
    let back = decode_packet(&bytes).expect("packet decodes");
    assert_eq!(back, packet);
    println!("decoded {} messages, identical to the input", back.messages.len());

    println!("\nvalidity time codes:");
    for secs in [0.1, 0.5, 1.5, 6.0, 30.0] {
        let v = Vtime::from_secs(secs).unwrap();
        println!("  {secs:>5} s -> 0x{:02x} -> {} s", v.0, v.as_secs());
    }
}
