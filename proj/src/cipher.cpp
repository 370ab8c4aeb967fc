#include <openssl/core_names.h>
#include <openssl/evp.h>

#include <memory>

#include "anonlog/anonymize.hpp"

namespace anonlog {

namespace {

std::string hmac_sha256_hex(const std::string& value, const std::string& key) {
  struct MacDeleter {
    void operator()(EVP_MAC* mac) const { EVP_MAC_free(mac); }
    void operator()(EVP_MAC_CTX* ctx) const { EVP_MAC_CTX_free(ctx); }
  };
  std::unique_ptr<EVP_MAC, MacDeleter> mac(EVP_MAC_fetch(nullptr, "HMAC", nullptr));
  if (!mac) throw IoError("OpenSSL HMAC implementation unavailable");
  std::unique_ptr<EVP_MAC_CTX, MacDeleter> ctx(EVP_MAC_CTX_new(mac.get()));
  if (!ctx) throw IoError("failed to create HMAC context");

  char digest_name[] = "SHA256";
  OSSL_PARAM params[] = {OSSL_PARAM_construct_utf8_string(OSSL_MAC_PARAM_DIGEST, digest_name, 0),
                         OSSL_PARAM_construct_end()};
  if (EVP_MAC_init(ctx.get(), reinterpret_cast<const unsigned char*>(key.data()), key.size(),
                   params) != 1 ||
      EVP_MAC_update(ctx.get(), reinterpret_cast<const unsigned char*>(value.data()),
                     value.size()) != 1) {
    throw IoError("HMAC computation failed");
  }
  unsigned char out[EVP_MAX_MD_SIZE];
  std::size_t out_len = 0;
  if (EVP_MAC_final(ctx.get(), out, &out_len, sizeof(out)) != 1) {
    throw IoError("HMAC computation failed");
  }

  static const char hex[] = "0123456789abcdef";
  std::string encoded;
  encoded.reserve(out_len * 2);
  for (std::size_t i = 0; i < out_len; ++i) {
    encoded += hex[out[i] >> 4];
    encoded += hex[out[i] & 0xf];
  }
  return encoded;
}

std::map<std::string, CipherFn>& cipher_registry() {
  static std::map<std::string, CipherFn> registry = {{"hmac_sha256", hmac_sha256_hex}};
  return registry;
}

}  // namespace

void register_cipher_method(const std::string& name, CipherFn fn) {
  cipher_registry()[name] = std::move(fn);
}

std::vector<std::string> registered_cipher_methods() {
  std::vector<std::string> names;
  for (const auto& [name, fn] : cipher_registry()) names.push_back(name);
  return names;
}

std::string encrypt_value(const std::string& value, const CipherSpec& cipher) {
  auto it = cipher_registry().find(cipher.method);
  if (it == cipher_registry().end()) {
    std::string known;
    for (const auto& name : registered_cipher_methods()) {
      if (!known.empty()) known += ", ";
      known += name;
    }
    throw UnsupportedError("unknown cipher method '" + cipher.method + "'; registered methods: " +
                           known);
  }
  return it->second(value, cipher.key);
}

}  // namespace anonlog
