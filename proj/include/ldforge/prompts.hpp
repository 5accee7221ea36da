#pragma once

#include <string>
#include <string_view>

#include "ldforge/format.hpp"

namespace ldforge {

// Format-specific system prompt used in generation records.
std::string_view system_prompt(FormatKind format);

// The closing user turn of an augmented conversation.
std::string final_user_turn(std::string_view query);

}  // namespace ldforge
