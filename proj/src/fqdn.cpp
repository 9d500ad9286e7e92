#include "pdnsa/fqdn.hpp"

namespace pdnsa {

std::string_view to_string(NameErrorKind kind) {
  switch (kind) {
    case NameErrorKind::EmptyName: return "EmptyName";
    case NameErrorKind::EmptyLabel: return "EmptyLabel";
    case NameErrorKind::LabelTooLong: return "LabelTooLong";
    case NameErrorKind::NameTooLong: return "NameTooLong";
  }
  return "NameError";
}

NameError::NameError(NameErrorKind kind, std::string_view raw)
    : Error(std::string(to_string(kind)) + ": '" + std::string(raw) + "'"), kind_(kind) {}

std::variant<Fqdn, NameErrorKind> Fqdn::try_parse(std::string_view raw) {
  std::string_view body = raw;
  if (!body.empty() && body.back() == '.') body.remove_suffix(1);
  if (body.empty()) return NameErrorKind::EmptyName;
  if (body.size() > kMaxNameLength) return NameErrorKind::NameTooLong;

  Fqdn out;
  out.raw_.assign(raw);
  out.name_.resize(body.size());
  std::size_t label_len = 0;
  std::size_t labels = 1;
  for (std::size_t i = 0; i < body.size(); ++i) {
    char c = body[i];
    if (c == '.') {
      if (label_len == 0) return NameErrorKind::EmptyLabel;
      label_len = 0;
      ++labels;
    } else {
      if (++label_len > kMaxLabelLength) return NameErrorKind::LabelTooLong;
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    out.name_[i] = c;
  }
  if (label_len == 0) return NameErrorKind::EmptyLabel;
  out.level_ = static_cast<std::uint16_t>(labels);
  return out;
}

Fqdn Fqdn::parse(std::string_view raw) {
  auto result = try_parse(raw);
  if (auto* err = std::get_if<NameErrorKind>(&result)) throw NameError(*err, raw);
  return std::get<Fqdn>(std::move(result));
}

Fqdn Fqdn::from_normalized(std::string_view dotted) {
  Fqdn out = parse(dotted);
  out.raw_ = out.name_;
  return out;
}

std::vector<std::string_view> Fqdn::labels() const {
  std::vector<std::string_view> out;
  out.reserve(level_);
  std::string_view rest = name_;
  while (true) {
    auto dot = rest.find('.');
    out.push_back(rest.substr(0, dot));
    if (dot == std::string_view::npos) break;
    rest.remove_prefix(dot + 1);
  }
  return out;
}

std::string_view Fqdn::label(std::size_t index) const {
  if (index >= level_) return {};
  std::string_view rest = name_;
  for (std::size_t i = 0; i < index; ++i) rest.remove_prefix(rest.find('.') + 1);
  return rest.substr(0, rest.find('.'));
}

std::string_view Fqdn::label_at_level(std::size_t level_index) const {
  if (level_index == 0 || level_index > level_) return {};
  return label(level_ - level_index);
}

Fqdn Fqdn::suffix(std::size_t n) const {
  if (n >= level_) return *this;
  std::size_t skip = level_ - n;
  std::size_t pos = 0;
  for (std::size_t i = 0; i < skip; ++i) pos = name_.find('.', pos) + 1;
  Fqdn out;
  out.name_ = name_.substr(pos);
  out.raw_ = out.name_;
  out.level_ = static_cast<std::uint16_t>(n);
  return out;
}

bool Fqdn::is_subdomain_of(const Fqdn& parent) const {
  const std::string& p = parent.name_;
  if (p.size() > name_.size()) return false;
  if (p.size() == name_.size()) return p == name_;
  return name_.compare(name_.size() - p.size(), p.size(), p) == 0 &&
         name_[name_.size() - p.size() - 1] == '.';
}

std::optional<std::size_t> label_length(const Fqdn& name, std::size_t level_index) {
  if (level_index == 0 || level_index > name.level()) return std::nullopt;
  return name.label_at_level(level_index).size();
}

}  // namespace pdnsa
