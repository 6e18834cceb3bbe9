#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

namespace pred {

using Bit = int;  // 0 or 1

// Finite binary string. The empty string is written "." in all file
// formats (an empty field would be ambiguous).
class BitStr {
public:
    BitStr() = default;

    static BitStr empty() { return BitStr(); }

    // Parses a string of '0'/'1' characters; "." denotes the empty string.
    static BitStr parse(const std::string& text);

    // The idx-th string of the given length in lexicographic order
    // (idx read as a big-endian bit pattern).
    static BitStr from_index(std::size_t length, std::uint64_t idx);

    std::size_t size() const { return bits_.size(); }
    bool is_empty() const { return bits_.empty(); }

    Bit bit(std::size_t i) const { return bits_[i] - '0'; }
    Bit last() const { return bits_.back() - '0'; }

    BitStr child(Bit b) const;
    BitStr parent() const;            // requires nonempty
    BitStr prefix(std::size_t n) const;  // first n digits, n <= size()
    BitStr concat(const BitStr& other) const;

    // The string with its final digit complemented; requires nonempty.
    BitStr complement_last() const;

    bool is_prefix_of(const BitStr& other) const;
    bool is_proper_prefix_of(const BitStr& other) const;

    void push_back(Bit b) { bits_.push_back(static_cast<char>('0' + b)); }
    void pop_back() { bits_.pop_back(); }

    std::size_t count_ones() const;

    // "." for the empty string, otherwise the digits.
    std::string str() const { return bits_.empty() ? "." : bits_; }

    // Plain lexicographic order on the digit strings (a prefix sorts
    // before its extensions), usable for map keys and free-interval
    // position: for prefix-incomparable strings this is left-to-right
    // order of the corresponding dyadic intervals.
    auto operator<=>(const BitStr&) const = default;

    const std::string& digits() const { return bits_; }

private:
    explicit BitStr(std::string bits) : bits_(std::move(bits)) {}
    std::string bits_;  // '0'/'1' characters
};

// All strings of exactly the given length, in lexicographic order.
std::vector<BitStr> all_strings_of_length(std::size_t n);

// All strings of length <= n, ordered by (length, lex).
std::vector<BitStr> all_strings_up_to(std::size_t n);

inline std::ostream& operator<<(std::ostream& os, const BitStr& s) { return os << s.str(); }

}  // namespace pred

template <>
struct std::hash<pred::BitStr> {
    std::size_t operator()(const pred::BitStr& s) const noexcept {
        return std::hash<std::string>{}(s.digits());
    }
};
