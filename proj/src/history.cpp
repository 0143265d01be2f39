#include "rrsem/history.hpp"

namespace rrsem {

CheckSet chks(const History& h) {
  CheckSet out;
  for (const auto& it : h)
    if (it.kind == HistoryItem::Kind::Check) out.insert(it.tau);
  return out;
}

History add(const HistoryItem& item, const History& h) {
  bool active = false;
  for (const auto& it : h)
    if (it.kind == HistoryItem::Kind::Check) {
      active = true;
      break;
    }
  if (!active) return h;
  History out;
  out.reserve(h.size() + 1);
  out.push_back(item);
  out.insert(out.end(), h.begin(), h.end());
  return out;
}

namespace {

std::size_t position(CheckId tau, const History& h) {
  for (std::size_t i = 0; i < h.size(); ++i)
    if (h[i].is_checkpoint() && h[i].tau == tau) return i;
  throw UnknownCheckpoint(tau);
}

}  // namespace

ChkResult chk(CheckId tau, const History& h) {
  std::size_t pos = position(tau, h);
  ChkResult r;
  r.saved = h[pos].state;
  r.rest.assign(h.begin() + static_cast<std::ptrdiff_t>(pos) + 1, h.end());
  for (std::size_t i = 0; i < pos; ++i) {
    const auto& it = h[i];
    switch (it.kind) {
      case HistoryItem::Kind::Send:
        r.L.insert(it.tag);
        r.P.insert(it.peer);
        break;
      case HistoryItem::Kind::Spawn:
        r.P.insert(it.peer);
        break;
      case HistoryItem::Kind::Rec:
        r.Ms.push_back(ExtendedMessage{it.cset, it.peer, it.receiver, it.tag, it.value, it.seq});
        break;
      default:
        break;
    }
  }
  return r;
}

bool last_active(CheckId tau, const History& h) {
  for (const auto& it : h)
    if (it.is_checkpoint()) return it.tau == tau;
  return false;
}

std::set<Pid> dp(CheckId tau, const History& h) { return chk(tau, h).P; }

History del(CheckId tau, const History& h) {
  std::size_t pos = position(tau, h);
  return History(h.begin() + static_cast<std::ptrdiff_t>(pos) + 1, h.end());
}

History delay(CheckId tau, const History& h) {
  for (std::size_t i = 0; i < h.size(); ++i)
    if (h[i].kind == HistoryItem::Kind::Check && h[i].tau == tau) {
      History out = h;
      out[i].kind = HistoryItem::Kind::DelayedCheck;
      return out;
    }
  throw UnknownCheckpoint(tau);
}

CheckSet delayed(const History& h) {
  for (const auto& it : h)
    if (it.kind == HistoryItem::Kind::DelayedCheck) return {it.tau};
  return {};
}

bool has_check(CheckId tau, const History& h) {
  for (const auto& it : h)
    if (it.kind == HistoryItem::Kind::Check && it.tau == tau) return true;
  return false;
}

bool has_checkpoint(CheckId tau, const History& h) {
  for (const auto& it : h)
    if (it.is_checkpoint() && it.tau == tau) return true;
  return false;
}

}  // namespace rrsem
