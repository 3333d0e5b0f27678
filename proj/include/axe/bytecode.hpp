#pragma once

#include "axe/common.hpp"
#include "axe/opcodes.hpp"

#include <vector>

namespace axe {

// One decoded EVM instruction. `immediate` holds the PUSH payload; for a PUSH
// torn off by the end of code the remaining bytes are kept and `truncated` is
// set so that serialization reproduces the input exactly.
struct Instruction {
    uint32_t offset = 0;
    uint8_t opcode = 0;
    Bytes immediate;
    bool truncated = false;

    bool is_push() const { return axe::is_push(opcode); }
    bool valid() const { return op_info(opcode) != nullptr && !truncated; }
    size_t size() const { return 1 + immediate.size(); }
    U256 push_value() const { return u256_from_bytes(immediate.data(), immediate.size()); }
    std::string mnemonic() const;
};

struct StripInfo {
    size_t code_len = 0;     // bytes kept
    size_t trailer_len = 0;  // bytes stripped (0 if no trailer matched)
};

// Drops the CBOR metadata trailer when the trailing two-byte length suffix
// matches and the trailer starts with a CBOR map header.
Bytes strip_metadata(const Bytes& code, StripInfo* info = nullptr);

// Hex text (optional 0x prefix) -> bytes. Rejects odd length / bad digits.
Bytes parse_bytecode_hex(std::string_view text);

// Decodes every byte exactly once; unknown opcodes become single invalid
// instructions. Throws EmptyBytecodeError on empty input.
std::vector<Instruction> disassemble(const Bytes& code);

// Exact inverse of disassemble (modulo any stripped trailer).
Bytes serialize(const std::vector<Instruction>& instructions);

std::string format_instruction(const Instruction& ins);

}  // namespace axe
