package com.example.app;

import okhttp3.OkHttpClient;

public class ImageLoader {
  private final OkHttpClient client;

  public ImageLoader(OkHttpClient shared) {
    this.client = shared;
  }
}
