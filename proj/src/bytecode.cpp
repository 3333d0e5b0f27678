#include "axe/bytecode.hpp"

namespace axe {

std::string Instruction::mnemonic() const {
    if (!op_info(opcode)) return opcode_name(opcode);
    std::string name = opcode_name(opcode);
    if (truncated) name += " (truncated)";
    return name;
}

Bytes strip_metadata(const Bytes& code, StripInfo* info) {
    if (info) *info = StripInfo{code.size(), 0};
    if (code.size() < 4) return code;
    size_t n = code.size();
    size_t suffix = (static_cast<size_t>(code[n - 2]) << 8) | code[n - 1];
    if (suffix == 0 || suffix + 2 > n) return code;
    uint8_t head = code[n - 2 - suffix];
    // Solidity emits a CBOR map ({"ipfs"/"bzzr"/"solc": ...}) of 1..3 entries.
    if (head != 0xa1 && head != 0xa2 && head != 0xa3) return code;
    Bytes out(code.begin(), code.end() - static_cast<long>(suffix + 2));
    if (info) *info = StripInfo{out.size(), suffix + 2};
    return out;
}

Bytes parse_bytecode_hex(std::string_view text) {
    // Trim ASCII whitespace around the hex payload.
    while (!text.empty() && (text.back() == '\n' || text.back() == '\r' || text.back() == ' ' ||
                             text.back() == '\t'))
        text.remove_suffix(1);
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t'))
        text.remove_prefix(1);
    return hex_decode(text);
}

std::vector<Instruction> disassemble(const Bytes& code) {
    if (code.empty()) throw EmptyBytecodeError();
    std::vector<Instruction> out;
    size_t pc = 0;
    while (pc < code.size()) {
        Instruction ins;
        ins.offset = static_cast<uint32_t>(pc);
        ins.opcode = code[pc];
        size_t width = push_width(ins.opcode);
        if (width > 0) {
            size_t avail = code.size() - pc - 1;
            size_t take = std::min(width, avail);
            ins.immediate.assign(code.begin() + static_cast<long>(pc + 1),
                                 code.begin() + static_cast<long>(pc + 1 + take));
            ins.truncated = take < width;
        }
        pc += ins.size();
        out.push_back(std::move(ins));
    }
    return out;
}

Bytes serialize(const std::vector<Instruction>& instructions) {
    Bytes out;
    for (const Instruction& ins : instructions) {
        out.push_back(ins.opcode);
        out.insert(out.end(), ins.immediate.begin(), ins.immediate.end());
    }
    return out;
}

std::string format_instruction(const Instruction& ins) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "0x%04x: ", ins.offset);
    std::string line = buf;
    line += ins.mnemonic();
    if (!ins.immediate.empty()) {
        line += ' ';
        line += hex_encode(ins.immediate);
    }
    return line;
}

}  // namespace axe
