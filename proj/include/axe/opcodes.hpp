#pragma once

#include <cstdint>
#include <string>

namespace axe {

// EVM opcode constants referenced by name in the analyses.
namespace op {
constexpr uint8_t STOP = 0x00;
constexpr uint8_t ADD = 0x01;
constexpr uint8_t MUL = 0x02;
constexpr uint8_t SUB = 0x03;
constexpr uint8_t DIV = 0x04;
constexpr uint8_t SDIV = 0x05;
constexpr uint8_t MOD = 0x06;
constexpr uint8_t SMOD = 0x07;
constexpr uint8_t ADDMOD = 0x08;
constexpr uint8_t MULMOD = 0x09;
constexpr uint8_t EXP = 0x0a;
constexpr uint8_t SIGNEXTEND = 0x0b;
constexpr uint8_t LT = 0x10;
constexpr uint8_t GT = 0x11;
constexpr uint8_t SLT = 0x12;
constexpr uint8_t SGT = 0x13;
constexpr uint8_t EQ = 0x14;
constexpr uint8_t ISZERO = 0x15;
constexpr uint8_t AND = 0x16;
constexpr uint8_t OR = 0x17;
constexpr uint8_t XOR = 0x18;
constexpr uint8_t NOT = 0x19;
constexpr uint8_t BYTE = 0x1a;
constexpr uint8_t SHL = 0x1b;
constexpr uint8_t SHR = 0x1c;
constexpr uint8_t SAR = 0x1d;
constexpr uint8_t KECCAK256 = 0x20;
constexpr uint8_t ADDRESS = 0x30;
constexpr uint8_t BALANCE = 0x31;
constexpr uint8_t ORIGIN = 0x32;
constexpr uint8_t CALLER = 0x33;
constexpr uint8_t CALLVALUE = 0x34;
constexpr uint8_t CALLDATALOAD = 0x35;
constexpr uint8_t CALLDATASIZE = 0x36;
constexpr uint8_t CALLDATACOPY = 0x37;
constexpr uint8_t CODESIZE = 0x38;
constexpr uint8_t CODECOPY = 0x39;
constexpr uint8_t GASPRICE = 0x3a;
constexpr uint8_t EXTCODESIZE = 0x3b;
constexpr uint8_t EXTCODECOPY = 0x3c;
constexpr uint8_t RETURNDATASIZE = 0x3d;
constexpr uint8_t RETURNDATACOPY = 0x3e;
constexpr uint8_t EXTCODEHASH = 0x3f;
constexpr uint8_t BLOCKHASH = 0x40;
constexpr uint8_t COINBASE = 0x41;
constexpr uint8_t TIMESTAMP = 0x42;
constexpr uint8_t NUMBER = 0x43;
constexpr uint8_t PREVRANDAO = 0x44;
constexpr uint8_t GASLIMIT = 0x45;
constexpr uint8_t CHAINID = 0x46;
constexpr uint8_t SELFBALANCE = 0x47;
constexpr uint8_t BASEFEE = 0x48;
constexpr uint8_t POP = 0x50;
constexpr uint8_t MLOAD = 0x51;
constexpr uint8_t MSTORE = 0x52;
constexpr uint8_t MSTORE8 = 0x53;
constexpr uint8_t SLOAD = 0x54;
constexpr uint8_t SSTORE = 0x55;
constexpr uint8_t JUMP = 0x56;
constexpr uint8_t JUMPI = 0x57;
constexpr uint8_t PC = 0x58;
constexpr uint8_t MSIZE = 0x59;
constexpr uint8_t GAS = 0x5a;
constexpr uint8_t JUMPDEST = 0x5b;
constexpr uint8_t PUSH0 = 0x5f;
constexpr uint8_t PUSH1 = 0x60;
constexpr uint8_t PUSH2 = 0x61;
constexpr uint8_t PUSH4 = 0x63;
constexpr uint8_t PUSH32 = 0x7f;
constexpr uint8_t DUP1 = 0x80;
constexpr uint8_t DUP16 = 0x8f;
constexpr uint8_t SWAP1 = 0x90;
constexpr uint8_t SWAP16 = 0x9f;
constexpr uint8_t LOG0 = 0xa0;
constexpr uint8_t LOG1 = 0xa1;
constexpr uint8_t LOG2 = 0xa2;
constexpr uint8_t LOG3 = 0xa3;
constexpr uint8_t LOG4 = 0xa4;
constexpr uint8_t CREATE = 0xf0;
constexpr uint8_t CALL = 0xf1;
constexpr uint8_t CALLCODE = 0xf2;
constexpr uint8_t RETURN = 0xf3;
constexpr uint8_t DELEGATECALL = 0xf4;
constexpr uint8_t CREATE2 = 0xf5;
constexpr uint8_t STATICCALL = 0xfa;
constexpr uint8_t REVERT = 0xfd;
constexpr uint8_t INVALID = 0xfe;
constexpr uint8_t SELFDESTRUCT = 0xff;
}  // namespace op

struct OpInfo {
    const char* name;
    uint8_t pops;
    uint8_t pushes;
    uint8_t immediate;  // immediate byte width (PUSH1..PUSH32 only)
};

// Returns nullptr for unassigned opcodes.
const OpInfo* op_info(uint8_t opcode);

inline bool is_push(uint8_t opcode) { return opcode >= op::PUSH0 && opcode <= op::PUSH32; }
inline bool is_dup(uint8_t opcode) { return opcode >= op::DUP1 && opcode <= op::DUP16; }
inline bool is_swap(uint8_t opcode) { return opcode >= op::SWAP1 && opcode <= op::SWAP16; }
inline bool is_log(uint8_t opcode) { return opcode >= op::LOG0 && opcode <= op::LOG4; }
inline unsigned push_width(uint8_t opcode) { return is_push(opcode) ? opcode - op::PUSH0 : 0; }

inline bool is_block_terminator(uint8_t opcode) {
    switch (opcode) {
        case op::STOP:
        case op::JUMP:
        case op::JUMPI:
        case op::RETURN:
        case op::REVERT:
        case op::INVALID:
        case op::SELFDESTRUCT:
            return true;
        default:
            return false;
    }
}

std::string opcode_name(uint8_t opcode);

}  // namespace axe
