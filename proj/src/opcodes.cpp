#include "axe/opcodes.hpp"

#include <array>

namespace axe {

namespace {

struct Table {
    std::array<OpInfo, 256> info{};
    std::array<bool, 256> assigned{};

    void set(uint8_t code, const char* name, uint8_t pops, uint8_t pushes, uint8_t imm = 0) {
        info[code] = OpInfo{name, pops, pushes, imm};
        assigned[code] = true;
    }

    Table() {
        set(op::STOP, "STOP", 0, 0);
        set(op::ADD, "ADD", 2, 1);
        set(op::MUL, "MUL", 2, 1);
        set(op::SUB, "SUB", 2, 1);
        set(op::DIV, "DIV", 2, 1);
        set(op::SDIV, "SDIV", 2, 1);
        set(op::MOD, "MOD", 2, 1);
        set(op::SMOD, "SMOD", 2, 1);
        set(op::ADDMOD, "ADDMOD", 3, 1);
        set(op::MULMOD, "MULMOD", 3, 1);
        set(op::EXP, "EXP", 2, 1);
        set(op::SIGNEXTEND, "SIGNEXTEND", 2, 1);
        set(op::LT, "LT", 2, 1);
        set(op::GT, "GT", 2, 1);
        set(op::SLT, "SLT", 2, 1);
        set(op::SGT, "SGT", 2, 1);
        set(op::EQ, "EQ", 2, 1);
        set(op::ISZERO, "ISZERO", 1, 1);
        set(op::AND, "AND", 2, 1);
        set(op::OR, "OR", 2, 1);
        set(op::XOR, "XOR", 2, 1);
        set(op::NOT, "NOT", 1, 1);
        set(op::BYTE, "BYTE", 2, 1);
        set(op::SHL, "SHL", 2, 1);
        set(op::SHR, "SHR", 2, 1);
        set(op::SAR, "SAR", 2, 1);
        set(op::KECCAK256, "KECCAK256", 2, 1);
        set(op::ADDRESS, "ADDRESS", 0, 1);
        set(op::BALANCE, "BALANCE", 1, 1);
        set(op::ORIGIN, "ORIGIN", 0, 1);
        set(op::CALLER, "CALLER", 0, 1);
        set(op::CALLVALUE, "CALLVALUE", 0, 1);
        set(op::CALLDATALOAD, "CALLDATALOAD", 1, 1);
        set(op::CALLDATASIZE, "CALLDATASIZE", 0, 1);
        set(op::CALLDATACOPY, "CALLDATACOPY", 3, 0);
        set(op::CODESIZE, "CODESIZE", 0, 1);
        set(op::CODECOPY, "CODECOPY", 3, 0);
        set(op::GASPRICE, "GASPRICE", 0, 1);
        set(op::EXTCODESIZE, "EXTCODESIZE", 1, 1);
        set(op::EXTCODECOPY, "EXTCODECOPY", 4, 0);
        set(op::RETURNDATASIZE, "RETURNDATASIZE", 0, 1);
        set(op::RETURNDATACOPY, "RETURNDATACOPY", 3, 0);
        set(op::EXTCODEHASH, "EXTCODEHASH", 1, 1);
        set(op::BLOCKHASH, "BLOCKHASH", 1, 1);
        set(op::COINBASE, "COINBASE", 0, 1);
        set(op::TIMESTAMP, "TIMESTAMP", 0, 1);
        set(op::NUMBER, "NUMBER", 0, 1);
        set(op::PREVRANDAO, "PREVRANDAO", 0, 1);
        set(op::GASLIMIT, "GASLIMIT", 0, 1);
        set(op::CHAINID, "CHAINID", 0, 1);
        set(op::SELFBALANCE, "SELFBALANCE", 0, 1);
        set(op::BASEFEE, "BASEFEE", 0, 1);
        set(op::POP, "POP", 1, 0);
        set(op::MLOAD, "MLOAD", 1, 1);
        set(op::MSTORE, "MSTORE", 2, 0);
        set(op::MSTORE8, "MSTORE8", 2, 0);
        set(op::SLOAD, "SLOAD", 1, 1);
        set(op::SSTORE, "SSTORE", 2, 0);
        set(op::JUMP, "JUMP", 1, 0);
        set(op::JUMPI, "JUMPI", 2, 0);
        set(op::PC, "PC", 0, 1);
        set(op::MSIZE, "MSIZE", 0, 1);
        set(op::GAS, "GAS", 0, 1);
        set(op::JUMPDEST, "JUMPDEST", 0, 0);
        set(op::PUSH0, "PUSH0", 0, 1, 0);
        for (unsigned w = 1; w <= 32; ++w) {
            static char names[32][8];
            std::snprintf(names[w - 1], sizeof(names[w - 1]), "PUSH%u", w);
            set(static_cast<uint8_t>(op::PUSH0 + w), names[w - 1], 0, 1, static_cast<uint8_t>(w));
        }
        for (unsigned n = 1; n <= 16; ++n) {
            static char dnames[16][8];
            static char snames[16][8];
            std::snprintf(dnames[n - 1], sizeof(dnames[n - 1]), "DUP%u", n);
            std::snprintf(snames[n - 1], sizeof(snames[n - 1]), "SWAP%u", n);
            set(static_cast<uint8_t>(op::DUP1 + n - 1), dnames[n - 1], static_cast<uint8_t>(n),
                static_cast<uint8_t>(n + 1));
            set(static_cast<uint8_t>(op::SWAP1 + n - 1), snames[n - 1], static_cast<uint8_t>(n + 1),
                static_cast<uint8_t>(n + 1));
        }
        for (unsigned n = 0; n <= 4; ++n) {
            static char lnames[5][8];
            std::snprintf(lnames[n], sizeof(lnames[n]), "LOG%u", n);
            set(static_cast<uint8_t>(op::LOG0 + n), lnames[n], static_cast<uint8_t>(2 + n), 0);
        }
        set(op::CREATE, "CREATE", 3, 1);
        set(op::CALL, "CALL", 7, 1);
        set(op::CALLCODE, "CALLCODE", 7, 1);
        set(op::RETURN, "RETURN", 2, 0);
        set(op::DELEGATECALL, "DELEGATECALL", 6, 1);
        set(op::CREATE2, "CREATE2", 4, 1);
        set(op::STATICCALL, "STATICCALL", 6, 1);
        set(op::REVERT, "REVERT", 2, 0);
        set(op::INVALID, "INVALID", 0, 0);
        set(op::SELFDESTRUCT, "SELFDESTRUCT", 1, 0);
    }
};

const Table& table() {
    static const Table t;
    return t;
}

}  // namespace

const OpInfo* op_info(uint8_t opcode) {
    const Table& t = table();
    return t.assigned[opcode] ? &t.info[opcode] : nullptr;
}

std::string opcode_name(uint8_t opcode) {
    if (const OpInfo* info = op_info(opcode)) return info->name;
    char buf[16];
    std::snprintf(buf, sizeof(buf), "UNKNOWN_0x%02x", opcode);
    return buf;
}

}  // namespace axe
