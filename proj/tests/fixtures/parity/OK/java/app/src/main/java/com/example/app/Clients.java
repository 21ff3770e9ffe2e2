package com.example.app;

import okhttp3.OkHttpClient;

public class Clients {
  private final OkHttpClient api = new OkHttpClient();
  private final OkHttpClient images = new OkHttpClient();
}
