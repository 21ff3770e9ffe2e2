package com.example.app;

import android.net.ConnectivityManager;
import android.util.Log;
import java.io.IOException;
import okhttp3.Call;
import okhttp3.Callback;
import okhttp3.OkHttpClient;
import okhttp3.Request;
import okhttp3.Response;
import okhttp3.ResponseBody;

public class Api {
  private final OkHttpClient client = new OkHttpClient();

  public void loadFeed(ConnectivityManager cm, String url) {
    if (!Net.ready(cm)) {
      return;
    }
    client.newCall(new Request.Builder().url(url).build()).enqueue(callback());
  }

  public void loadProfile(ConnectivityManager cm, String url) {
    if (!Checks.ok(cm)) {
      return;
    }
    client.newCall(new Request.Builder().url(url).build()).enqueue(callback());
  }

  private Callback callback() {
    return new Callback() {
      @Override
      public void onFailure(Call call, IOException e) {
        Log.w("Api", "request failed", e);
      }

      @Override
      public void onResponse(Call call, Response response) throws IOException {
        if (!response.isSuccessful()) {
          return;
        }
        ResponseBody body = response.body();
        if (body == null) {
          return;
        }
        show(body.string());
      }
    };
  }

  private void show(String text) {
  }
}
