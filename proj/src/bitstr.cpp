#include "pred/bitstr.hpp"

#include <algorithm>

#include "pred/errors.hpp"

namespace pred {

BitStr BitStr::parse(const std::string& text) {
    if (text == ".") return BitStr();
    if (text.empty())
        throw ParseError("empty bit string field; the empty string is written \".\"");
    for (char c : text) {
        if (c != '0' && c != '1')
            throw ParseError("invalid bit string \"" + text + "\": expected digits 0/1 or \".\"");
    }
    return BitStr(text);
}

BitStr BitStr::from_index(std::size_t length, std::uint64_t idx) {
    std::string bits(length, '0');
    for (std::size_t i = 0; i < length; ++i) {
        if (idx >> (length - 1 - i) & 1) bits[i] = '1';
    }
    return BitStr(bits);
}

BitStr BitStr::child(Bit b) const {
    BitStr out = *this;
    out.push_back(b);
    return out;
}

BitStr BitStr::parent() const {
    BitStr out = *this;
    out.pop_back();
    return out;
}

BitStr BitStr::prefix(std::size_t n) const { return BitStr(bits_.substr(0, n)); }

BitStr BitStr::concat(const BitStr& other) const { return BitStr(bits_ + other.bits_); }

BitStr BitStr::complement_last() const {
    if (bits_.empty()) throw PreconditionError("complement_last: empty string has no last digit");
    BitStr out = *this;
    out.bits_.back() = out.bits_.back() == '0' ? '1' : '0';
    return out;
}

bool BitStr::is_prefix_of(const BitStr& other) const {
    return bits_.size() <= other.bits_.size() &&
           other.bits_.compare(0, bits_.size(), bits_) == 0;
}

bool BitStr::is_proper_prefix_of(const BitStr& other) const {
    return bits_.size() < other.bits_.size() && is_prefix_of(other);
}

std::size_t BitStr::count_ones() const {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), '1'));
}

std::vector<BitStr> all_strings_of_length(std::size_t n) {
    std::vector<BitStr> out;
    out.reserve(std::size_t{1} << n);
    for (std::uint64_t i = 0; i < (std::uint64_t{1} << n); ++i)
        out.push_back(BitStr::from_index(n, i));
    return out;
}

std::vector<BitStr> all_strings_up_to(std::size_t n) {
    std::vector<BitStr> out;
    for (std::size_t len = 0; len <= n; ++len) {
        auto level = all_strings_of_length(len);
        out.insert(out.end(), level.begin(), level.end());
    }
    return out;
}

}  // namespace pred
